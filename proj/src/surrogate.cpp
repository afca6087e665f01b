#include "hbi/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <stdexcept>

#include "hbi/cross_modal.hpp"
#include "hbi/errors.hpp"
#include "hbi/rng.hpp"

namespace hbi {

namespace {

struct Activations {
  std::vector<double> z1, a1, z2, a2, y;
};

void forward(const SurrogateModel& m, std::span<const double> x, Activations& act) {
  const int in = m.input_size(), h = m.hidden, out = m.input_size();
  act.z1.assign(static_cast<std::size_t>(h), 0.0);
  act.a1.assign(static_cast<std::size_t>(h), 0.0);
  act.z2.assign(static_cast<std::size_t>(h), 0.0);
  act.a2.assign(static_cast<std::size_t>(h), 0.0);
  act.y.assign(static_cast<std::size_t>(out), 0.0);
  for (int r = 0; r < h; ++r) {
    double acc = m.b1[r];
    for (int c = 0; c < in; ++c) acc += m.w1(r, c) * x[c];
    act.z1[r] = acc;
    act.a1[r] = std::max(0.0, acc);
  }
  for (int r = 0; r < h; ++r) {
    double acc = m.b2[r];
    for (int c = 0; c < h; ++c) acc += m.w2(r, c) * act.a1[c];
    act.z2[r] = acc;
    act.a2[r] = std::max(0.0, acc);
  }
  for (int r = 0; r < out; ++r) {
    double acc = m.b3[r];
    for (int c = 0; c < h; ++c) acc += m.w3(r, c) * act.a2[c];
    act.y[r] = acc;
  }
}

struct Gradients {
  Mat w1, w2, w3;
  std::vector<double> b1, b2, b3;

  explicit Gradients(const SurrogateModel& m)
      : w1(m.hidden, m.input_size()),
        w2(m.hidden, m.hidden),
        w3(m.input_size(), m.hidden),
        b1(static_cast<std::size_t>(m.hidden), 0.0),
        b2(static_cast<std::size_t>(m.hidden), 0.0),
        b3(static_cast<std::size_t>(m.input_size()), 0.0) {}
};

void check_dataset(const SurrogateModel& m, std::span<const TrainingPair> dataset) {
  if (dataset.empty()) throw std::invalid_argument("dataset is empty");
  for (const auto& pair : dataset) {
    if (pair.alignment.n_v() != m.n_v || pair.alignment.n_t() != m.n_t)
      throw std::invalid_argument("alignment shape does not match the model");
    if (pair.target.rows != m.n_v || pair.target.cols != m.n_t)
      throw std::invalid_argument("target shape does not match the model");
  }
}

// MSE over all samples and entries, with the gradient accumulated in a fixed
// sample order.
double mse_and_grad(const SurrogateModel& m, std::span<const TrainingPair> dataset,
                    Gradients* grad) {
  const int in = m.input_size(), h = m.hidden, out = m.input_size();
  const double denom = static_cast<double>(dataset.size()) * out;
  Activations act;
  std::vector<double> dy(static_cast<std::size_t>(out));
  std::vector<double> dz2(static_cast<std::size_t>(h)), dz1(static_cast<std::size_t>(h));
  double loss = 0.0;
  for (const auto& pair : dataset) {
    forward(m, pair.alignment.a.data, act);
    for (int o = 0; o < out; ++o) {
      double resid = act.y[o] - pair.target.data[o];
      loss += resid * resid;
      dy[o] = 2.0 * resid / denom;
    }
    if (!grad) continue;
    for (int o = 0; o < out; ++o) {
      grad->b3[o] += dy[o];
      for (int c = 0; c < h; ++c) grad->w3(o, c) += dy[o] * act.a2[c];
    }
    for (int c = 0; c < h; ++c) {
      double acc = 0.0;
      for (int o = 0; o < out; ++o) acc += m.w3(o, c) * dy[o];
      dz2[c] = act.z2[c] > 0.0 ? acc : 0.0;
    }
    for (int r = 0; r < h; ++r) {
      grad->b2[r] += dz2[r];
      for (int c = 0; c < h; ++c) grad->w2(r, c) += dz2[r] * act.a1[c];
    }
    for (int c = 0; c < h; ++c) {
      double acc = 0.0;
      for (int r = 0; r < h; ++r) acc += m.w2(r, c) * dz2[r];
      dz1[c] = act.z1[c] > 0.0 ? acc : 0.0;
    }
    for (int r = 0; r < h; ++r) {
      grad->b1[r] += dz1[r];
      for (int c = 0; c < in; ++c) grad->w1(r, c) += dz1[r] * pair.alignment.a.data[c];
    }
  }
  return loss / denom;
}

void glorot_fill(Mat& w, Rng& rng) {
  double limit = std::sqrt(6.0 / (w.rows + w.cols));
  for (double& v : w.data) v = uniform(rng, -limit, limit);
}

}  // namespace

SurrogateModel init_surrogate(int n_v, int n_t, int hidden, std::uint64_t seed) {
  if (n_v < 1 || n_t < 1 || hidden < 1) throw std::invalid_argument("bad surrogate shape");
  SurrogateModel m;
  m.n_v = n_v;
  m.n_t = n_t;
  m.hidden = hidden;
  m.w1 = Mat(hidden, n_v * n_t);
  m.w2 = Mat(hidden, hidden);
  m.w3 = Mat(n_v * n_t, hidden);
  m.b1.assign(static_cast<std::size_t>(hidden), 0.0);
  m.b2.assign(static_cast<std::size_t>(hidden), 0.0);
  m.b3.assign(static_cast<std::size_t>(n_v * n_t), 0.0);
  Rng rng(mix_seed(seed, 1));
  glorot_fill(m.w1, rng);
  glorot_fill(m.w2, rng);
  glorot_fill(m.w3, rng);
  return m;
}

TrainResult surrogate_train(std::span<const TrainingPair> dataset, const TrainConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("dataset is empty");
  if (cfg.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  TrainResult result;
  result.model = init_surrogate(dataset[0].alignment.n_v(), dataset[0].alignment.n_t(), cfg.hidden,
                                cfg.seed);
  check_dataset(result.model, dataset);

  std::vector<double> velocity(surrogate_parameters(result.model).size(), 0.0);
  result.loss_trace.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Gradients grad(result.model);
    double loss = mse_and_grad(result.model, dataset, &grad);
    result.loss_trace.push_back(loss);
    if (!std::isfinite(loss)) {
      result.diverged = true;
      result.diverged_epoch = epoch;
      break;
    }
    std::vector<double> params = surrogate_parameters(result.model);
    std::vector<double> flat;
    flat.reserve(params.size());
    flat.insert(flat.end(), grad.w1.data.begin(), grad.w1.data.end());
    flat.insert(flat.end(), grad.b1.begin(), grad.b1.end());
    flat.insert(flat.end(), grad.w2.data.begin(), grad.w2.data.end());
    flat.insert(flat.end(), grad.b2.begin(), grad.b2.end());
    flat.insert(flat.end(), grad.w3.data.begin(), grad.w3.data.end());
    flat.insert(flat.end(), grad.b3.begin(), grad.b3.end());
    for (std::size_t p = 0; p < params.size(); ++p) {
      velocity[p] = cfg.momentum * velocity[p] - cfg.learning_rate * flat[p];
      params[p] += velocity[p];
    }
    set_surrogate_parameters(result.model, params);
  }
  return result;
}

InteractionMap surrogate_predict(const SurrogateModel& model, const AlignmentMatrix& alignment) {
  if (alignment.n_v() != model.n_v || alignment.n_t() != model.n_t)
    throw std::invalid_argument("alignment shape does not match the model");
  Activations act;
  forward(model, alignment.a.data, act);
  InteractionMap map;
  map.method = Method::surrogate;
  map.values = Mat(model.n_v, model.n_t);
  map.values.data = act.y;
  return map;
}

double surrogate_mse(const SurrogateModel& model, std::span<const TrainingPair> dataset) {
  check_dataset(model, dataset);
  return mse_and_grad(model, dataset, nullptr);
}

std::vector<double> surrogate_parameters(const SurrogateModel& m) {
  std::vector<double> out;
  out.reserve(m.w1.size() + m.b1.size() + m.w2.size() + m.b2.size() + m.w3.size() + m.b3.size());
  out.insert(out.end(), m.w1.data.begin(), m.w1.data.end());
  out.insert(out.end(), m.b1.begin(), m.b1.end());
  out.insert(out.end(), m.w2.data.begin(), m.w2.data.end());
  out.insert(out.end(), m.b2.begin(), m.b2.end());
  out.insert(out.end(), m.w3.data.begin(), m.w3.data.end());
  out.insert(out.end(), m.b3.begin(), m.b3.end());
  return out;
}

void set_surrogate_parameters(SurrogateModel& m, std::span<const double> params) {
  std::size_t expected = m.w1.size() + m.b1.size() + m.w2.size() + m.b2.size() + m.w3.size() +
                         m.b3.size();
  if (params.size() != expected) throw std::invalid_argument("parameter vector size mismatch");
  auto it = params.begin();
  auto take = [&](auto& dst) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
    it += static_cast<std::ptrdiff_t>(dst.size());
  };
  take(m.w1.data);
  take(m.b1);
  take(m.w2.data);
  take(m.b2);
  take(m.w3.data);
  take(m.b3);
}

std::vector<double> surrogate_mse_grad(const SurrogateModel& model,
                                       std::span<const TrainingPair> dataset) {
  check_dataset(model, dataset);
  Gradients grad(model);
  mse_and_grad(model, dataset, &grad);
  std::vector<double> flat;
  flat.insert(flat.end(), grad.w1.data.begin(), grad.w1.data.end());
  flat.insert(flat.end(), grad.b1.begin(), grad.b1.end());
  flat.insert(flat.end(), grad.w2.data.begin(), grad.w2.data.end());
  flat.insert(flat.end(), grad.b2.begin(), grad.b2.end());
  flat.insert(flat.end(), grad.w3.data.begin(), grad.w3.data.end());
  flat.insert(flat.end(), grad.b3.begin(), grad.b3.end());
  return flat;
}

void save_surrogate_json(const std::filesystem::path& path, const SurrogateModel& model,
                         const TrainConfig& cfg, double final_loss) {
  nlohmann::json doc = {
      {"format", "hbi-surrogate"},
      {"version", 1},
      {"n_v", model.n_v},
      {"n_t", model.n_t},
      {"hidden", model.hidden},
      {"weights",
       {{"w1", model.w1.data},
        {"b1", model.b1},
        {"w2", model.w2.data},
        {"b2", model.b2},
        {"w3", model.w3.data},
        {"b3", model.b3}}},
      {"training",
       {{"epochs", cfg.epochs},
        {"learning_rate", cfg.learning_rate},
        {"momentum", cfg.momentum},
        {"seed", cfg.seed},
        {"final_loss", final_loss}}}};
  std::ofstream out(path);
  if (!out) throw ParseError(path.string(), 0, "cannot open file for writing");
  out << doc.dump(2) << '\n';
}

SurrogateModel load_surrogate_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), static_cast<int>(e.byte), std::string("invalid JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != "hbi-surrogate" || doc.at("version") != 1)
      throw std::invalid_argument("unsupported model format/version");
    SurrogateModel m;
    m.n_v = doc.at("n_v").get<int>();
    m.n_t = doc.at("n_t").get<int>();
    m.hidden = doc.at("hidden").get<int>();
    if (m.n_v < 1 || m.n_t < 1 || m.hidden < 1) throw std::invalid_argument("bad model shape");
    const auto& w = doc.at("weights");
    m.w1 = Mat(m.hidden, m.input_size());
    m.w2 = Mat(m.hidden, m.hidden);
    m.w3 = Mat(m.input_size(), m.hidden);
    auto load_vec = [&](const char* key, std::vector<double>& dst, std::size_t size) {
      dst = w.at(key).get<std::vector<double>>();
      if (dst.size() != size)
        throw std::invalid_argument(std::string(key) + " has the wrong length");
    };
    load_vec("w1", m.w1.data, static_cast<std::size_t>(m.hidden) * m.input_size());
    load_vec("b1", m.b1, static_cast<std::size_t>(m.hidden));
    load_vec("w2", m.w2.data, static_cast<std::size_t>(m.hidden) * m.hidden);
    load_vec("b2", m.b2, static_cast<std::size_t>(m.hidden));
    load_vec("w3", m.w3.data, static_cast<std::size_t>(m.input_size()) * m.hidden);
    load_vec("b3", m.b3, static_cast<std::size_t>(m.input_size()));
    for (double v : surrogate_parameters(m))
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite model parameter");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, std::string("bad model document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

std::vector<TrainingPair> load_training_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ParseError(dir.string(), 0, "not a directory");
  std::vector<std::filesystem::path> alignments;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.starts_with("alignment_") && name.ends_with(".csv")) alignments.push_back(entry.path());
  }
  std::sort(alignments.begin(), alignments.end());
  if (alignments.empty()) throw ParseError(dir.string(), 0, "no alignment_*.csv files found");

  std::vector<TrainingPair> dataset;
  dataset.reserve(alignments.size());
  for (const auto& apath : alignments) {
    std::string stem = apath.filename().string();
    std::string suffix = stem.substr(std::string("alignment_").size());
    std::filesystem::path tpath = apath.parent_path() / ("target_" + suffix);
    if (!std::filesystem::exists(tpath))
      throw ParseError(tpath.string(), 0, "missing target for " + stem);
    TrainingPair pair;
    pair.alignment = load_alignment_csv(apath);
    pair.target = load_alignment_csv(tpath).a;
    if (pair.target.rows != pair.alignment.n_v() || pair.target.cols != pair.alignment.n_t())
      throw ParseError(tpath.string(), 0, "target shape differs from its alignment");
    if (!dataset.empty() && (pair.alignment.n_v() != dataset[0].alignment.n_v() ||
                             pair.alignment.n_t() != dataset[0].alignment.n_t()))
      throw ParseError(apath.string(), 0, "all training pairs must share one shape");
    dataset.push_back(std::move(pair));
  }
  return dataset;
}

void save_training_dir(const std::filesystem::path& dir, std::span<const TrainingPair> dataset) {
  std::filesystem::create_directories(dir);
  char name[48];
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    std::snprintf(name, sizeof(name), "alignment_%04zu.csv", k);
    save_alignment_csv(dir / name, dataset[k].alignment);
    std::snprintf(name, sizeof(name), "target_%04zu.csv", k);
    AlignmentMatrix target;
    target.a = dataset[k].target;
    save_alignment_csv(dir / name, target);
  }
}

std::vector<TrainingPair> synthetic_dataset(int count, int n_v, int n_t, std::uint64_t seed,
                                            int cap) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const int dim = 8;
  std::vector<TrainingPair> dataset;
  dataset.reserve(static_cast<std::size_t>(count));
  std::vector<int> frames(static_cast<std::size_t>(n_v)), words(static_cast<std::size_t>(n_t));
  std::iota(frames.begin(), frames.end(), 0);
  std::iota(words.begin(), words.end(), n_v);
  for (int k = 0; k < count; ++k) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(k)));
    auto draw_tokens = [&](int n, Modality m) {
      Mat t(n, dim);
      for (double& v : t.data) v = normal(rng);
      return make_token_set(std::move(t), m);
    };
    TokenSet video = draw_tokens(n_v, Modality::visual);
    TokenSet text = draw_tokens(n_t, Modality::textual);
    TrainingPair pair;
    pair.alignment = alignment_matrix(video, text);
    CrossModalGame game = make_cross_modal_game(pair.alignment);
    pair.target = interaction_matrix_exact(game.as_game(), frames, words, cap).values;
    dataset.push_back(std::move(pair));
  }
  return dataset;
}

}  // namespace hbi
