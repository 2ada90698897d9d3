#include "chillops/nn.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

#include "chillops/common.hpp"
#include "chillops/kernels.hpp"

namespace chillops::nn {

using json = nlohmann::ordered_json;

Family family_from_name(const std::string& name) {
  if (name == "mlp") return Family::Mlp;
  if (name == "lstm") return Family::Lstm;
  throw ConfigError("unknown model family: " + name);
}

const char* family_name(Family f) { return f == Family::Mlp ? "mlp" : "lstm"; }

static double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ============================================================================
// MLP
// ============================================================================

MlpModel MlpModel::zeros(int input, int hidden) {
  MlpModel m;
  m.input = input;
  m.hidden = hidden;
  m.params.assign(m.size(), 0.0);
  return m;
}

double mlp_forward(const MlpModel& m, const double* x) {
  const double* W1 = m.params.data() + m.w1();
  const double* b1 = m.params.data() + m.b1();
  const double* W2 = m.params.data() + m.w2();
  const double b2 = m.params[m.b2()];
  double out = b2;
  for (int j = 0; j < m.hidden; ++j) {
    const double z = kern::dot(W1 + static_cast<std::size_t>(j) * m.input, x,
                               m.input) + b1[j];
    out += W2[j] * std::tanh(z);
  }
  return out;
}

void mlp_gradient(const MlpModel& m, const double* xs, const double* ys,
                  std::size_t n, std::vector<double>& grad) {
  if (n == 0) throw InputError("gradient of an empty batch");
  grad.assign(m.size(), 0.0);
  const double* W1 = m.params.data() + m.w1();
  const double* b1 = m.params.data() + m.b1();
  const double* W2 = m.params.data() + m.w2();
  const double b2 = m.params[m.b2()];

  double* gW1 = grad.data() + m.w1();
  double* gb1 = grad.data() + m.b1();
  double* gW2 = grad.data() + m.w2();
  double* gb2 = grad.data() + m.b2();

  std::vector<double> h(m.hidden);
  const double inv_m = 1.0 / static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double* x = xs + r * m.input;
    double yhat = b2;
    for (int j = 0; j < m.hidden; ++j) {
      h[j] = std::tanh(kern::dot(W1 + static_cast<std::size_t>(j) * m.input, x,
                                 m.input) + b1[j]);
      yhat += W2[j] * h[j];
    }
    const double delta = 2.0 * (yhat - ys[r]) * inv_m;
    *gb2 += delta;
    kern::axpy(delta, h.data(), gW2, m.hidden);
    for (int j = 0; j < m.hidden; ++j) {
      const double e = delta * W2[j] * (1.0 - h[j] * h[j]);
      gb1[j] += e;
      kern::axpy(e, x, gW1 + static_cast<std::size_t>(j) * m.input, m.input);
    }
  }
}

// ============================================================================
// LSTM
// ============================================================================

LstmModel LstmModel::zeros(int input, int hidden) {
  LstmModel m;
  m.input = input;
  m.hidden = hidden;
  m.params.assign(m.size(), 0.0);
  return m;
}

namespace {

struct LstmCaches {
  // per step: concat input u = [h_prev, x], gate activations, cell states
  std::vector<double> u, f, i, c, o, cell, cell_prev, tanh_cell;
  void resize(int steps, int h, int u_width) {
    u.assign(static_cast<std::size_t>(steps) * u_width, 0.0);
    const std::size_t sh = static_cast<std::size_t>(steps) * h;
    f.assign(sh, 0.0);
    i.assign(sh, 0.0);
    c.assign(sh, 0.0);
    o.assign(sh, 0.0);
    cell.assign(sh, 0.0);
    cell_prev.assign(sh, 0.0);
    tanh_cell.assign(sh, 0.0);
  }
};

// Runs the gate recursion; returns the prediction and fills caches when
// given. h_out receives the final hidden state.
double lstm_run(const LstmModel& m, const double* seq, int steps,
                LstmCaches* caches, std::vector<double>& h_out) {
  const int H = m.hidden;
  const int U = m.hidden + m.input;
  const double* Wf = m.params.data() + m.gate_w(0);
  const double* Wi = m.params.data() + m.gate_w(1);
  const double* Wc = m.params.data() + m.gate_w(2);
  const double* Wo = m.params.data() + m.gate_w(3);
  const double* bf = m.params.data() + m.gate_b(0);
  const double* bi = m.params.data() + m.gate_b(1);
  const double* bc = m.params.data() + m.gate_b(2);
  const double* bo = m.params.data() + m.gate_b(3);

  std::vector<double> h(H, 0.0), cell(H, 0.0), u(U);
  if (caches) caches->resize(steps, H, U);

  for (int t = 0; t < steps; ++t) {
    std::copy_n(h.data(), H, u.data());
    std::copy_n(seq + static_cast<std::size_t>(t) * m.input, m.input, u.data() + H);
    for (int j = 0; j < H; ++j) {
      const std::size_t off = static_cast<std::size_t>(j) * U;
      const double f = sigmoid(kern::dot(Wf + off, u.data(), U) + bf[j]);
      const double i = sigmoid(kern::dot(Wi + off, u.data(), U) + bi[j]);
      const double c = std::tanh(kern::dot(Wc + off, u.data(), U) + bc[j]);
      const double o = sigmoid(kern::dot(Wo + off, u.data(), U) + bo[j]);
      const double cell_prev = cell[j];
      cell[j] = f * cell_prev + i * c;
      h[j] = o * std::tanh(cell[j]);
      if (caches) {
        const std::size_t at = static_cast<std::size_t>(t) * H + j;
        caches->f[at] = f;
        caches->i[at] = i;
        caches->c[at] = c;
        caches->o[at] = o;
        caches->cell[at] = cell[j];
        caches->cell_prev[at] = cell_prev;
        caches->tanh_cell[at] = std::tanh(cell[j]);
      }
    }
    if (caches)
      std::copy_n(u.data(), U, caches->u.data() + static_cast<std::size_t>(t) * U);
  }
  h_out = h;
  return kern::dot(m.params.data() + m.head_w(), h.data(), H) +
         m.params[m.head_b()];
}

}  // namespace

double lstm_forward(const LstmModel& m, const double* seq, int steps) {
  if (steps < 1) throw InputError("lstm_forward: empty sequence");
  std::vector<double> h;
  return lstm_run(m, seq, steps, nullptr, h);
}

void lstm_gradient(const LstmModel& m, const double* seqs, const double* ys,
                   std::size_t n, int steps, std::vector<double>& grad) {
  if (n == 0) throw InputError("gradient of an empty batch");
  if (steps < 1) throw InputError("lstm_gradient: empty sequence");
  grad.assign(m.size(), 0.0);
  const int H = m.hidden;
  const int U = m.hidden + m.input;
  const double* Wf = m.params.data() + m.gate_w(0);
  const double* Wi = m.params.data() + m.gate_w(1);
  const double* Wc = m.params.data() + m.gate_w(2);
  const double* Wo = m.params.data() + m.gate_w(3);
  double* gWf = grad.data() + m.gate_w(0);
  double* gWi = grad.data() + m.gate_w(1);
  double* gWc = grad.data() + m.gate_w(2);
  double* gWo = grad.data() + m.gate_w(3);
  double* gbf = grad.data() + m.gate_b(0);
  double* gbi = grad.data() + m.gate_b(1);
  double* gbc = grad.data() + m.gate_b(2);
  double* gbo = grad.data() + m.gate_b(3);
  double* ghw = grad.data() + m.head_w();
  double* ghb = grad.data() + m.head_b();

  LstmCaches caches;
  std::vector<double> h_final;
  std::vector<double> dh(H), dcell(H), du(U);
  std::vector<double> dzf(H), dzi(H), dzc(H), dzo(H);
  const double inv_m = 1.0 / static_cast<double>(n);

  for (std::size_t r = 0; r < n; ++r) {
    const double* seq = seqs + r * static_cast<std::size_t>(steps) * m.input;
    const double yhat = lstm_run(m, seq, steps, &caches, h_final);
    const double delta = 2.0 * (yhat - ys[r]) * inv_m;

    *ghb += delta;
    kern::axpy(delta, h_final.data(), ghw, H);
    for (int j = 0; j < H; ++j) dh[j] = delta * m.params[m.head_w() + j];
    std::fill(dcell.begin(), dcell.end(), 0.0);

    for (int t = steps - 1; t >= 0; --t) {
      const std::size_t at = static_cast<std::size_t>(t) * H;
      const double* u = caches.u.data() + static_cast<std::size_t>(t) * U;
      for (int j = 0; j < H; ++j) {
        const double f = caches.f[at + j];
        const double i = caches.i[at + j];
        const double c = caches.c[at + j];
        const double o = caches.o[at + j];
        const double tc = caches.tanh_cell[at + j];
        const double dc = dcell[j] + dh[j] * o * (1.0 - tc * tc);
        dzo[j] = dh[j] * tc * o * (1.0 - o);
        dzf[j] = dc * caches.cell_prev[at + j] * f * (1.0 - f);
        dzi[j] = dc * c * i * (1.0 - i);
        dzc[j] = dc * i * (1.0 - c * c);
        dcell[j] = dc * f;
      }
      std::fill(du.begin(), du.end(), 0.0);
      for (int j = 0; j < H; ++j) {
        const std::size_t off = static_cast<std::size_t>(j) * U;
        kern::axpy(dzf[j], u, gWf + off, U);
        kern::axpy(dzi[j], u, gWi + off, U);
        kern::axpy(dzc[j], u, gWc + off, U);
        kern::axpy(dzo[j], u, gWo + off, U);
        gbf[j] += dzf[j];
        gbi[j] += dzi[j];
        gbc[j] += dzc[j];
        gbo[j] += dzo[j];
        kern::axpy(dzf[j], Wf + off, du.data(), U);
        kern::axpy(dzi[j], Wi + off, du.data(), U);
        kern::axpy(dzc[j], Wc + off, du.data(), U);
        kern::axpy(dzo[j], Wo + off, du.data(), U);
      }
      std::copy_n(du.data(), H, dh.data());
    }
  }
}

int row_to_sequence(const feat::FeatureMatrix& m, std::size_t row,
                    std::vector<double>& seq) {
  const int N = m.spec.lag_depth;
  const int static_width = static_cast<int>(m.width) - N;
  const int step_width = static_width + 1;
  const double* x = m.row(row);
  seq.assign(static_cast<std::size_t>(N) * step_width, 0.0);
  for (int t = 0; t < N; ++t) {
    double* dst = seq.data() + static_cast<std::size_t>(t) * step_width;
    std::copy_n(x, static_width, dst);
    // lag columns are [lag0, lag1, ...]; oldest step first
    dst[static_width] = x[static_width + (N - 1 - t)];
  }
  return step_width;
}

// ============================================================================
// Training
// ============================================================================

void TrainConfig::validate() const {
  if (!(lr > 0)) throw ConfigError("nn learning rate must be > 0");
  if (runs < 1) throw ConfigError("nn.runs must be >= 1");
  if (epochs < 1) throw ConfigError("nn epochs must be >= 1");
  if (batch < 1) throw ConfigError("nn.batch must be >= 1");
  if (std::abs(split_train + split_val + split_test - 1.0) > 1e-9)
    throw ConfigError("nn split fractions must sum to 1");
}

double TrainedModel::predict_row(const feat::FeatureMatrix& m,
                                 std::size_t row) const {
  if (family == Family::Mlp) {
    if (static_cast<int>(m.width) != mlp.input)
      throw InputError("feature width does not match model input");
    return mlp_forward(mlp, m.row(row));
  }
  std::vector<double> seq;
  const int step_width = row_to_sequence(m, row, seq);
  if (step_width != lstm.input)
    throw InputError("feature width does not match model input");
  return lstm_forward(lstm, seq.data(), m.spec.lag_depth);
}

namespace {

struct Split {
  std::vector<std::size_t> train, val, test;
};

Split make_split(const feat::FeatureMatrix& data, const TrainConfig& cfg) {
  const std::size_t n = data.rows();
  std::size_t n_train = data.train_count > 0 && data.train_count < n
                            ? data.train_count
                            : static_cast<std::size_t>(cfg.split_train * n);
  std::size_t n_val = static_cast<std::size_t>(cfg.split_val * n);
  if (n_train == 0 || n_val == 0 || n_train + n_val >= n)
    throw InputError("not enough rows for a train/val/test split");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (cfg.split_mode == SplitMode::Random) {
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::shuffle(idx.begin(), idx.end(), rng);
  }
  Split s;
  s.train.assign(idx.begin(), idx.begin() + n_train);
  s.val.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
  s.test.assign(idx.begin() + n_train + n_val, idx.end());
  return s;
}

struct OptimizerState {
  Optimizer kind;
  double lr, momentum;
  std::vector<double> m1, m2;
  long step = 0;

  OptimizerState(Optimizer k, double lr_, double mom, std::size_t n)
      : kind(k), lr(lr_), momentum(mom), m1(n, 0.0), m2(n, 0.0) {}

  void apply(std::vector<double>& params, const std::vector<double>& grad) {
    ++step;
    switch (kind) {
      case Optimizer::Sgd:
        kern::axpy(-lr, grad.data(), params.data(), params.size());
        break;
      case Optimizer::Momentum:
        for (std::size_t i = 0; i < params.size(); ++i) {
          m1[i] = momentum * m1[i] + grad[i];
          params[i] -= lr * m1[i];
        }
        break;
      case Optimizer::Adam: {
        const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        const double bc1 = 1.0 - std::pow(b1, step);
        const double bc2 = 1.0 - std::pow(b2, step);
        for (std::size_t i = 0; i < params.size(); ++i) {
          m1[i] = b1 * m1[i] + (1 - b1) * grad[i];
          m2[i] = b2 * m2[i] + (1 - b2) * grad[i] * grad[i];
          params[i] -= lr * (m1[i] / bc1) / (std::sqrt(m2[i] / bc2) + eps);
        }
        break;
      }
    }
  }
};

void clip_gradient(std::vector<double>& grad, double clip) {
  if (clip <= 0) return;
  const double norm = std::sqrt(kern::sumsq(grad.data(), grad.size()));
  if (norm > clip) {
    const double s = clip / norm;
    for (double& g : grad) g *= s;
  }
}

void init_uniform(std::vector<double>& w, std::size_t off, std::size_t count,
                  int fan_in, int fan_out, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (std::size_t i = 0; i < count; ++i) w[off + i] = dist(rng);
}

struct RunOutcome {
  TrainedModel model;
  double val_rmse_norm = std::numeric_limits<double>::infinity();
  bool failed = false;
};

}  // namespace

TrainedModel train(Family family, const feat::FeatureMatrix& data,
                   const TrainConfig& cfg, EvalReport& report) {
  cfg.validate();
  const auto t_begin = std::chrono::steady_clock::now();
  const Split split = make_split(data, cfg);
  const std::size_t n = data.rows();

  // normalized targets
  std::vector<double> y_norm(n);
  for (std::size_t i = 0; i < n; ++i)
    y_norm[i] = feat::zscore_apply(data.load_scaler, data.y_rt[i]);
  const double target_sd = data.load_scaler.degenerate ? 1.0 : data.load_scaler.sd;

  // LSTM input sequences are materialized once
  std::vector<double> seqs;
  int step_width = 0;
  const int steps = data.spec.lag_depth;
  if (family == Family::Lstm) {
    std::vector<double> one;
    step_width = row_to_sequence(data, 0, one);
    seqs.resize(n * one.size());
    for (std::size_t r = 0; r < n; ++r) {
      row_to_sequence(data, r, one);
      std::copy(one.begin(), one.end(),
                seqs.begin() + r * static_cast<std::size_t>(steps) * step_width);
    }
  }

  auto eval_rmse_norm = [&](const TrainedModel& tm,
                            const std::vector<std::size_t>& rows) {
    double ss = 0.0;
    for (std::size_t r : rows) {
      double yhat;
      if (family == Family::Mlp) {
        yhat = mlp_forward(tm.mlp, data.row(r));
      } else {
        yhat = lstm_forward(
            tm.lstm, seqs.data() + r * static_cast<std::size_t>(steps) * step_width,
            steps);
      }
      const double d = yhat - y_norm[r];
      ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(rows.size()));
  };

  auto run_one = [&](int run) {
    RunOutcome out;
    out.model.family = family;
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(run));

    std::vector<double>* params = nullptr;
    if (family == Family::Mlp) {
      out.model.mlp = MlpModel::zeros(static_cast<int>(data.width), cfg.hidden);
      auto& m = out.model.mlp;
      init_uniform(m.params, m.w1(), static_cast<std::size_t>(m.hidden) * m.input,
                   m.input, m.hidden, rng);
      init_uniform(m.params, m.w2(), m.hidden, m.hidden, 1, rng);
      params = &m.params;
    } else {
      out.model.lstm = LstmModel::zeros(step_width, cfg.hidden);
      auto& m = out.model.lstm;
      const int u_width = m.hidden + m.input;
      for (int g = 0; g < 4; ++g)
        init_uniform(m.params, m.gate_w(g),
                     static_cast<std::size_t>(m.hidden) * u_width, u_width,
                     m.hidden, rng);
      init_uniform(m.params, m.head_w(), m.hidden, m.hidden, 1, rng);
      params = &m.params;
    }

    OptimizerState opt(cfg.optimizer, cfg.lr, cfg.momentum, params->size());
    std::vector<std::size_t> order = split.train;
    std::vector<double> grad, bx, by;
    std::vector<double> bseq;
    for (int epoch = 0; epoch < cfg.epochs && !out.failed; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t pos = 0; pos < order.size(); pos += cfg.batch) {
        const std::size_t take = std::min<std::size_t>(cfg.batch, order.size() - pos);
        by.resize(take);
        if (family == Family::Mlp) {
          bx.resize(take * data.width);
          for (std::size_t b = 0; b < take; ++b) {
            std::copy_n(data.row(order[pos + b]), data.width,
                        bx.data() + b * data.width);
            by[b] = y_norm[order[pos + b]];
          }
          mlp_gradient(out.model.mlp, bx.data(), by.data(), take, grad);
        } else {
          const std::size_t sw = static_cast<std::size_t>(steps) * step_width;
          bseq.resize(take * sw);
          for (std::size_t b = 0; b < take; ++b) {
            std::copy_n(seqs.data() + order[pos + b] * sw, sw, bseq.data() + b * sw);
            by[b] = y_norm[order[pos + b]];
          }
          lstm_gradient(out.model.lstm, bseq.data(), by.data(), take, steps, grad);
        }
        clip_gradient(grad, cfg.clip);
        opt.apply(*params, grad);
        for (double p : *params) {
          if (!std::isfinite(p)) {
            out.failed = true;
            break;
          }
        }
        if (out.failed) break;
      }
    }
    if (!out.failed) {
      out.val_rmse_norm = eval_rmse_norm(out.model, split.val);
      if (!std::isfinite(out.val_rmse_norm)) out.failed = true;
    }
    if (out.failed)
      out.val_rmse_norm = std::numeric_limits<double>::infinity();
    return out;
  };

  // independent runs, deterministic reduction over the results
  std::vector<RunOutcome> outcomes(cfg.runs);
  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, cfg.runs));
  if (workers == 1) {
    for (int r = 0; r < cfg.runs; ++r) outcomes[r] = run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const int r = next.fetch_add(1);
          if (r >= cfg.runs) return;
          outcomes[r] = run_one(r);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  report.run_val_rmse.clear();
  report.run_failed.clear();
  int best = -1;
  for (int r = 0; r < cfg.runs; ++r) {
    report.run_val_rmse.push_back(outcomes[r].val_rmse_norm * target_sd);
    report.run_failed.push_back(outcomes[r].failed);
    if (outcomes[r].failed) continue;
    if (best < 0 || outcomes[r].val_rmse_norm < outcomes[best].val_rmse_norm)
      best = r;
  }
  if (best < 0) throw TrainingError("all training runs diverged");

  report.selected_run = best;
  const TrainedModel& tm = outcomes[best].model;
  report.train_rmse = eval_rmse_norm(tm, split.train) * target_sd;
  report.val_rmse = eval_rmse_norm(tm, split.val) * target_sd;
  report.test_rmse = eval_rmse_norm(tm, split.test) * target_sd;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
          .count();
  return tm;
}

double rmse(const std::vector<double>& y, const std::vector<double>& yhat) {
  if (y.empty()) throw InputError("rmse of empty series");
  if (y.size() != yhat.size()) throw InputError("rmse length mismatch");
  const double ss = kern::sumsq_diff(y.data(), yhat.data(), y.size());
  return std::sqrt(ss / static_cast<double>(y.size()));
}

LoadSeries predict_series(const TrainedModel& model,
                          const feat::FeatureMatrix& data) {
  if (data.rows() == 0) throw InputError("no feature rows to predict");
  LoadSeries out;
  out.start = data.row_time.front() + data.step;
  out.step = data.step;
  out.provenance = Provenance::Predicted;
  out.values.reserve(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const double z = model.predict_row(data, r);
    out.values.push_back(feat::zscore_invert(data.load_scaler, z));
  }
  return out;
}

// ============================================================================
// Serialization
// ============================================================================

std::string save_model(const TrainedModel& m, const std::string& header) {
  json j;
  j["header"] = header;
  j["family"] = family_name(m.family);
  if (m.family == Family::Mlp) {
    j["input"] = m.mlp.input;
    j["hidden"] = m.mlp.hidden;
    j["params"] = m.mlp.params;
  } else {
    j["input"] = m.lstm.input;
    j["hidden"] = m.lstm.hidden;
    j["params"] = m.lstm.params;
  }
  return j.dump(2) + "\n";
}

TrainedModel load_model_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("model file is not valid JSON");
  TrainedModel m;
  m.family = family_from_name(j.at("family").get<std::string>());
  const int input = j.at("input").get<int>();
  const int hidden = j.at("hidden").get<int>();
  std::vector<double> params = j.at("params").get<std::vector<double>>();
  if (m.family == Family::Mlp) {
    m.mlp = MlpModel::zeros(input, hidden);
    if (params.size() != m.mlp.size())
      throw InputError("model parameter count mismatch");
    m.mlp.params = std::move(params);
  } else {
    m.lstm = LstmModel::zeros(input, hidden);
    if (params.size() != m.lstm.size())
      throw InputError("model parameter count mismatch");
    m.lstm.params = std::move(params);
  }
  return m;
}

std::string save_eval_report(const EvalReport& r, Family family,
                             const std::string& set_name,
                             const std::string& header) {
  json j;
  j["header"] = header;
  j["set"] = set_name;
  j["family"] = family_name(family);
  j["run_val_rmse_rt"] = json::array();
  for (std::size_t i = 0; i < r.run_val_rmse.size(); ++i) {
    if (r.run_failed[i])
      j["run_val_rmse_rt"].push_back("failed");
    else
      j["run_val_rmse_rt"].push_back(r.run_val_rmse[i]);
  }
  j["selected_run"] = r.selected_run;
  j["train_rmse_rt"] = r.train_rmse;
  j["val_rmse_rt"] = r.val_rmse;
  j["test_rmse_rt"] = r.test_rmse;
  return j.dump(2) + "\n";
}

}  // namespace chillops::nn
