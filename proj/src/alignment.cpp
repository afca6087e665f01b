#include "hbi/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hbi/errors.hpp"

namespace hbi {

AlignmentMatrix alignment_matrix(const TokenSet& video, const TokenSet& text) {
  validate(video);
  validate(text);
  if (video.dim() != text.dim())
    throw DimensionMismatch("embedding dims differ: video " + std::to_string(video.dim()) +
                            " vs text " + std::to_string(text.dim()));

  auto norms = [](const TokenSet& ts) {
    std::vector<double> out(static_cast<std::size_t>(ts.count()));
    for (int i = 0; i < ts.count(); ++i) {
      double n2 = 0.0;
      for (int d = 0; d < ts.dim(); ++d) n2 += ts.tokens(i, d) * ts.tokens(i, d);
      out[i] = std::sqrt(n2);
    }
    return out;
  };
  std::vector<double> nv = norms(video), nt = norms(text);

  AlignmentMatrix m;
  m.a = Mat(video.count(), text.count());
  for (int i = 0; i < video.count(); ++i) {
    for (int j = 0; j < text.count(); ++j) {
      double dot = 0.0;
      for (int d = 0; d < video.dim(); ++d) dot += video.tokens(i, d) * text.tokens(j, d);
      // Rounding can push |cos| a hair past 1; clamp to keep the invariant.
      m.a(i, j) = std::clamp(dot / (nv[i] * nt[j]), -1.0, 1.0);
    }
  }
  return m;
}

AlignmentMatrix load_alignment_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path.string(), 0, "empty file");
  ++line_no;

  int n_v = 0, n_t = 0;
  {
    std::istringstream header(line);
    char comma = 0;
    if (!(header >> n_v >> comma >> n_t) || comma != ',' || n_v < 1 || n_t < 1)
      throw ParseError(path.string(), line_no, "expected header \"N_v,N_t\"");
  }

  AlignmentMatrix m;
  m.a = Mat(n_v, n_t);
  for (int i = 0; i < n_v; ++i) {
    if (!std::getline(in, line)) throw ParseError(path.string(), line_no, "missing matrix row " + std::to_string(i));
    ++line_no;
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < n_t; ++j) {
      if (!std::getline(row, cell, ','))
        throw ParseError(path.string(), line_no, "row has fewer than " + std::to_string(n_t) + " values");
      try {
        std::size_t used = 0;
        m.a(i, j) = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError(path.string(), line_no, "malformed value: " + cell);
      }
      if (!std::isfinite(m.a(i, j)))
        throw ParseError(path.string(), line_no, "non-finite value");
    }
    if (std::getline(row, cell, ','))
      throw ParseError(path.string(), line_no, "row has more than " + std::to_string(n_t) + " values");
  }
  return m;
}

void save_alignment_csv(const std::filesystem::path& path, const AlignmentMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError(path.string(), 0, "cannot open file for writing");
  out.precision(17);
  out << m.n_v() << ',' << m.n_t() << '\n';
  for (int i = 0; i < m.n_v(); ++i) {
    for (int j = 0; j < m.n_t(); ++j) out << (j ? "," : "") << m.a(i, j);
    out << '\n';
  }
}

}  // namespace hbi
