#ifndef HBI_ALIGNMENT_HPP
#define HBI_ALIGNMENT_HPP

#include <filesystem>

#include "hbi/matrix.hpp"
#include "hbi/token_set.hpp"

namespace hbi {

/// N_v x N_t cosine similarities between visual and textual tokens; entries
/// lie in [-1, 1].
struct AlignmentMatrix {
  Mat a;

  int n_v() const { return a.rows; }
  int n_t() const { return a.cols; }
};

/// Entry (i, j) is the cosine of frame i and word j. Throws on dimension
/// mismatch or zero-norm tokens.
AlignmentMatrix alignment_matrix(const TokenSet& video, const TokenSet& text);

/// CSV layout: first line "N_v,N_t" (the two sizes), then N_v rows of N_t
/// comma-separated values.
AlignmentMatrix load_alignment_csv(const std::filesystem::path& path);
void save_alignment_csv(const std::filesystem::path& path, const AlignmentMatrix& m);

}  // namespace hbi

#endif
