#ifndef HBI_SURROGATE_HPP
#define HBI_SURROGATE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hbi/alignment.hpp"
#include "hbi/banzhaf.hpp"
#include "hbi/matrix.hpp"

namespace hbi {

/// Small perceptron estimating a full interaction map from a flattened
/// alignment matrix: input N_v*N_t -> hidden -> hidden -> output N_v*N_t,
/// rectifier nonlinearity. Stands in for the pre-trained interaction
/// estimator behind a narrow interface, so a convolutional variant could be
/// swapped in without touching callers.
struct SurrogateModel {
  int n_v = 0;
  int n_t = 0;
  int hidden = 64;
  Mat w1, w2, w3;  // hidden x in, hidden x hidden, out x hidden
  std::vector<double> b1, b2, b3;

  int input_size() const { return n_v * n_t; }
};

struct TrainingPair {
  AlignmentMatrix alignment;
  Mat target;  // exact interaction map of the same shape
};

struct TrainConfig {
  int epochs = 500;
  double learning_rate = 0.02;
  double momentum = 0.9;
  int hidden = 64;
  std::uint64_t seed = 0;
};

struct TrainResult {
  SurrogateModel model;
  std::vector<double> loss_trace;  // pre-update MSE per epoch
  bool diverged = false;
  int diverged_epoch = -1;
};

SurrogateModel init_surrogate(int n_v, int n_t, int hidden, std::uint64_t seed);

/// Full-batch gradient descent with momentum on the MSE between predicted
/// and exact maps. Single-threaded with a fixed accumulation order, so the
/// result is a pure function of (dataset, config).
TrainResult surrogate_train(std::span<const TrainingPair> dataset, const TrainConfig& cfg);

InteractionMap surrogate_predict(const SurrogateModel& model, const AlignmentMatrix& alignment);

double surrogate_mse(const SurrogateModel& model, std::span<const TrainingPair> dataset);

/// Flattened parameter access (w1,b1,w2,b2,w3,b3 row-major), used by the
/// optimizer and by finite-difference checks.
std::vector<double> surrogate_parameters(const SurrogateModel& model);
void set_surrogate_parameters(SurrogateModel& model, std::span<const double> params);
std::vector<double> surrogate_mse_grad(const SurrogateModel& model,
                                       std::span<const TrainingPair> dataset);

/// Versioned JSON document with shapes, row-major weights and training
/// metadata.
void save_surrogate_json(const std::filesystem::path& path, const SurrogateModel& model,
                         const TrainConfig& cfg, double final_loss);
SurrogateModel load_surrogate_json(const std::filesystem::path& path);

/// Directory of paired files alignment_XXXX.csv / target_XXXX.csv.
std::vector<TrainingPair> load_training_dir(const std::filesystem::path& dir);
void save_training_dir(const std::filesystem::path& dir, std::span<const TrainingPair> dataset);

/// Synthetic corpus: unit-scale random tokens give cosine alignment
/// matrices; targets are exact interaction maps of the induced cross-modal
/// game. n_v + n_t must stay within the exact cap.
std::vector<TrainingPair> synthetic_dataset(int count, int n_v, int n_t, std::uint64_t seed,
                                            int cap = kDefaultExactCap);

}  // namespace hbi

#endif
