#include "hbi/token_set.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "hbi/errors.hpp"

namespace hbi {

const char* modality_name(Modality m) {
  return m == Modality::visual ? "visual" : "textual";
}

std::vector<double> uniform_weights(int count) {
  return std::vector<double>(static_cast<std::size_t>(count), 1.0 / count);
}

void validate(const TokenSet& ts) {
  if (ts.count() < 1) throw std::invalid_argument("token set is empty");
  for (int i = 0; i < ts.count(); ++i) {
    double norm2 = 0.0;
    for (int d = 0; d < ts.dim(); ++d) {
      double v = ts.tokens(i, d);
      if (!std::isfinite(v)) throw std::invalid_argument("token " + std::to_string(i) + " has a non-finite entry");
      norm2 += v * v;
    }
    if (norm2 == 0.0) throw std::invalid_argument("token " + std::to_string(i) + " has zero norm");
  }
  if (static_cast<int>(ts.weights.size()) != ts.count())
    throw std::invalid_argument("weight count does not match token count");
  double sum = 0.0;
  for (double w : ts.weights) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("weights must be finite and non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to 1 within 1e-9, got " + std::to_string(sum));
}

TokenSet make_token_set(Mat tokens, Modality modality, std::vector<double> weights) {
  TokenSet ts;
  ts.tokens = std::move(tokens);
  ts.modality = modality;
  ts.weights = weights.empty() ? uniform_weights(ts.count()) : std::move(weights);
  validate(ts);
  return ts;
}

TokenSet parse_token_set_json(std::istream& in, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin, static_cast<int>(e.byte), std::string("invalid JSON: ") + e.what());
  }

  try {
    std::string modality = doc.at("modality").get<std::string>();
    Modality m;
    if (modality == "visual") m = Modality::visual;
    else if (modality == "textual") m = Modality::textual;
    else throw std::invalid_argument("modality must be \"visual\" or \"textual\"");

    const auto& rows = doc.at("tokens");
    if (!rows.is_array() || rows.empty()) throw std::invalid_argument("\"tokens\" must be a non-empty array");
    int count = static_cast<int>(rows.size());
    int dim = static_cast<int>(rows[0].size());
    if (dim < 1) throw std::invalid_argument("tokens must have at least one dimension");
    Mat tokens(count, dim);
    for (int i = 0; i < count; ++i) {
      if (static_cast<int>(rows[i].size()) != dim)
        throw std::invalid_argument("token rows must all have the same length");
      for (int d = 0; d < dim; ++d) tokens(i, d) = rows[i][d].get<double>();
    }

    std::vector<double> weights;
    if (doc.contains("weights")) weights = doc["weights"].get<std::vector<double>>();
    return make_token_set(std::move(tokens), m, std::move(weights));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin, 0, std::string("bad token document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(origin, 0, e.what());
  }
}

TokenSet load_token_set_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_token_set_json(in, path.string());
}

}  // namespace hbi
