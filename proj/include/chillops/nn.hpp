#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chillops/features.hpp"
#include "chillops/series.hpp"

namespace chillops::nn {

enum class Family { Mlp, Lstm };
enum class Optimizer { Sgd, Momentum, Adam };
enum class SplitMode { Chronological, Random };

Family family_from_name(const std::string& name);
const char* family_name(Family f);

/// One hidden tanh layer, identity output. Parameters live in one flat
/// vector so the optimizers and the finite-difference checks can treat every
/// model uniformly: [W1 (hidden x input), b1, W2 (hidden), b2].
struct MlpModel {
  int input = 0;
  int hidden = 0;
  std::vector<double> params;

  static MlpModel zeros(int input, int hidden);
  std::size_t w1() const { return 0; }
  std::size_t b1() const { return static_cast<std::size_t>(hidden) * input; }
  std::size_t w2() const { return b1() + hidden; }
  std::size_t b2() const { return w2() + hidden; }
  std::size_t size() const { return b2() + 1; }
};

double mlp_forward(const MlpModel& m, const double* x);

/// Exact analytic gradient of J = (1/m) sum (y - yhat)^2 over the batch.
/// xs is row-major n x input.
void mlp_gradient(const MlpModel& m, const double* xs, const double* ys,
                  std::size_t n, std::vector<double>& grad);

/// Single-layer LSTM over a short lag sequence with a dense head on the
/// final hidden state. Gate weights act on [h, x] concatenations. Flat
/// layout: W_f, W_i, W_C, W_o (each hidden x (hidden+input)), b_f, b_i,
/// b_C, b_o, head weights (hidden), head bias.
struct LstmModel {
  int input = 0;
  int hidden = 0;
  std::vector<double> params;

  static LstmModel zeros(int input, int hidden);
  std::size_t gate_w(int g) const {
    return static_cast<std::size_t>(g) * hidden * (hidden + input);
  }
  std::size_t gate_b(int g) const {
    return static_cast<std::size_t>(4) * hidden * (hidden + input) +
           static_cast<std::size_t>(g) * hidden;
  }
  std::size_t head_w() const { return gate_b(4); }
  std::size_t head_b() const { return head_w() + hidden; }
  std::size_t size() const { return head_b() + 1; }
};

/// seq is steps x input, oldest step first; h_0 = C_0 = 0.
double lstm_forward(const LstmModel& m, const double* seq, int steps);

/// Backpropagation through time for the mean-squared loss; seqs is
/// n x steps x input.
void lstm_gradient(const LstmModel& m, const double* seqs, const double* ys,
                   std::size_t n, int steps, std::vector<double>& grad);

/// Rewrites a feature row as the per-step LSTM inputs: each of the N lag
/// steps sees the static block (day type, time, weather) plus its own lag,
/// ordered oldest to newest. Returns the per-step width.
int row_to_sequence(const feat::FeatureMatrix& m, std::size_t row,
                    std::vector<double>& seq);

struct TrainConfig {
  double lr = 0.01;
  int epochs = 100;
  int batch = 32;
  int runs = 10;
  double split_train = 0.70;
  double split_val = 0.15;
  double split_test = 0.15;
  std::uint64_t seed = 42;
  double clip = 5.0;  // global-norm gradient clip, 0 disables
  Optimizer optimizer = Optimizer::Adam;
  double momentum = 0.9;
  SplitMode split_mode = SplitMode::Chronological;
  int hidden = 16;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct EvalReport {
  std::vector<double> run_val_rmse;  // RT; failed runs hold +inf
  std::vector<bool> run_failed;
  int selected_run = -1;
  double train_rmse = 0.0;  // RT, de-normalized, selected model
  double val_rmse = 0.0;
  double test_rmse = 0.0;
  double wall_seconds = 0.0;  // console diagnostics only, never serialized
};

struct TrainedModel {
  Family family = Family::Mlp;
  MlpModel mlp;
  LstmModel lstm;

  double predict_row(const feat::FeatureMatrix& m, std::size_t row) const;
};

/// Chronological 70/15/15 protocol with `runs` independent initializations
/// (run r seeded cfg.seed + r); the run with the lowest validation RMSE
/// wins, ties to the lowest index. Diverged runs are excluded.
TrainedModel train(Family family, const feat::FeatureMatrix& data,
                   const TrainConfig& cfg, EvalReport& report);

double rmse(const std::vector<double>& y, const std::vector<double>& yhat);

/// Forward pass over every row, outputs de-normalized to RT and stamped at
/// the prediction target instants (t + one step).
LoadSeries predict_series(const TrainedModel& model,
                          const feat::FeatureMatrix& data);

std::string save_model(const TrainedModel& m, const std::string& header);
TrainedModel load_model_text(const std::string& text);

std::string save_eval_report(const EvalReport& r, Family family,
                             const std::string& set_name,
                             const std::string& header);

}  // namespace chillops::nn
