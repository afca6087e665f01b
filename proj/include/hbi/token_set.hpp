#ifndef HBI_TOKEN_SET_HPP
#define HBI_TOKEN_SET_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hbi/matrix.hpp"

namespace hbi {

enum class Modality { visual, textual };

const char* modality_name(Modality m);

/// A sequence of embedding vectors for one modality, each carrying a
/// non-negative weight; weights sum to 1 (within 1e-9 on input).
struct TokenSet {
  Mat tokens;  // count x dim
  Modality modality = Modality::visual;
  std::vector<double> weights;

  int count() const { return tokens.rows; }
  int dim() const { return tokens.cols; }
};

std::vector<double> uniform_weights(int count);

TokenSet make_token_set(Mat tokens, Modality modality, std::vector<double> weights = {});

/// Throws std::invalid_argument on non-finite entries, zero-norm tokens, or
/// weights that are negative or do not sum to 1 within 1e-9.
void validate(const TokenSet& ts);

/// JSON document: {"modality": "visual"|"textual", "tokens": [[...], ...],
/// "weights": [...]}; weights are optional and default to uniform.
TokenSet load_token_set_json(const std::filesystem::path& path);
TokenSet parse_token_set_json(std::istream& in, const std::string& origin);

}  // namespace hbi

#endif
