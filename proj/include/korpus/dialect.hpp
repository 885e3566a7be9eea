#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace korpus {

/// Elicited wordlist for one locale: gloss -> variant forms, already
/// trimmed and case-folded. Every stored gloss has at least one variant;
/// a gloss the locale was never elicited for is simply absent.
struct WordList {
  std::string locale;
  std::map<std::string, std::set<std::string>> entries;
};

/// Trim + case-fold one variant cell entry.
std::string fold_variant(std::string_view s);

/// Fraction of shared glosses whose variant sets are disjoint. Any shared
/// form counts as agreement; glosses known to only one list are ignored.
/// Throws Error(NoSharedGlosses) when the lists share nothing.
double lexical_distance(const WordList& a, const WordList& b);

struct DistanceMatrix {
  std::vector<std::string> locales;
  std::vector<double> values;  // row-major, symmetric, zero diagonal

  double at(std::size_t i, std::size_t j) const { return values[i * locales.size() + j]; }
};

DistanceMatrix pairwise_distance_matrix(std::span<const WordList> lists);

/// CSV with header `gloss,<locale1>,<locale2>,...`; a cell holds one or
/// more comma-separated variants (quoted per CSV rules), and empty cells
/// mean the gloss was not elicited for that locale.
std::vector<WordList> load_wordlists_csv(const std::string& path);

void write_distance_matrix_csv(std::ostream& out, const DistanceMatrix& matrix);

}  // namespace korpus
