#pragma once

#include <stdexcept>
#include <string>

namespace korpus {

enum class Errc {
  IoError,
  FormatError,
  EmptyRegistry,
  EmptyCorpus,
  SingleLabelCorpus,
  LabelSetMismatch,
  EmptyDataset,
  SingleLabelDataset,
  UnlabeledData,
  DimensionMismatch,
  InsufficientCities,
  NonInformalInput,
  MissingCity,
  NoSharedGlosses,
  UnknownLabel,
  EmptyMatrix,
  BadFractions,
  ClassTooSmall,
  EmptyInput,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace korpus
