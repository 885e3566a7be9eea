#include "korpus/dialect.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "korpus/corpus_model.hpp"
#include "korpus/csv.hpp"
#include "korpus/error.hpp"

namespace korpus {

std::string fold_variant(std::string_view s) { return utf8_fold_lower(trim(s)); }

double lexical_distance(const WordList& a, const WordList& b) {
  std::size_t shared = 0;
  std::size_t disjoint = 0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      ++shared;
      const auto& va = ia->second;
      const auto& vb = ib->second;
      bool intersects = false;
      for (const std::string& variant : va) {
        if (vb.count(variant) != 0) {
          intersects = true;
          break;
        }
      }
      if (!intersects) ++disjoint;
      ++ia;
      ++ib;
    }
  }
  if (shared == 0) {
    raise(Errc::NoSharedGlosses, "wordlists " + a.locale + " and " + b.locale + " share no glosses");
  }
  return static_cast<double>(disjoint) / static_cast<double>(shared);
}

DistanceMatrix pairwise_distance_matrix(std::span<const WordList> lists) {
  if (lists.size() < 2) raise(Errc::EmptyInput, "need at least two wordlists");
  DistanceMatrix matrix;
  matrix.locales.reserve(lists.size());
  for (const WordList& list : lists) matrix.locales.push_back(list.locale);
  const std::size_t n = lists.size();
  matrix.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = lexical_distance(lists[i], lists[j]);
      matrix.values[i * n + j] = d;
      matrix.values[j * n + i] = d;
    }
  }
  return matrix;
}

std::vector<WordList> load_wordlists_csv(const std::string& path) {
  const auto rows = read_csv(path);
  if (rows.empty()) raise(Errc::FormatError, path + ": empty wordlist file");
  const auto& header = rows.front();
  if (header.size() < 2 || trim(header[0]) != "gloss") {
    raise(Errc::FormatError, path + ": expected header gloss,<locale1>,<locale2>,...");
  }
  std::vector<WordList> lists(header.size() - 1);
  for (std::size_t c = 1; c < header.size(); ++c) {
    lists[c - 1].locale = trim(header[c]);
    if (lists[c - 1].locale.empty()) raise(Errc::FormatError, path + ": blank locale name");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string gloss = trim(row[0]);
    if (gloss.empty()) raise(Errc::FormatError, path + ": blank gloss in row " + std::to_string(r + 1));
    for (std::size_t c = 1; c < row.size() && c < header.size(); ++c) {
      // a cell holds comma-separated variants; empty means not elicited
      std::size_t start = 0;
      const std::string& cell = row[c];
      while (start <= cell.size()) {
        const std::size_t comma = cell.find(',', start);
        const std::size_t end = comma == std::string::npos ? cell.size() : comma;
        const std::string variant = fold_variant(std::string_view(cell).substr(start, end - start));
        if (!variant.empty()) lists[c - 1].entries[gloss].insert(variant);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
  }
  return lists;
}

void write_distance_matrix_csv(std::ostream& out, const DistanceMatrix& matrix) {
  out << "locale";
  for (const std::string& locale : matrix.locales) out << ',' << csv_escape(locale);
  out << '\n';
  const std::size_t n = matrix.locales.size();
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    out << csv_escape(matrix.locales[i]);
    for (std::size_t j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.6f", matrix.at(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace korpus
