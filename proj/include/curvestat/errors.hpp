#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "curvestat/ffield.hpp"

namespace curvestat {

/// A theorem hypothesis (or operation precondition tied to one) failed.
/// names() lists the violated hypotheses in the order they were checked.
class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(std::vector<std::string> names, const std::string& detail = {})
      : std::runtime_error(format(names, detail)), names_(std::move(names)) {}

  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  static std::string format(const std::vector<std::string>& names, const std::string& detail) {
    std::string msg = "hypothesis violated:";
    for (const auto& n : names) msg += " [" + n + "]";
    if (!detail.empty()) msg += " " + detail;
    return msg;
  }

  std::vector<std::string> names_;
};

/// Condition (*) fails: some x in the x-interval has two or more y in the
/// y-interval on the curve.
class ConditionStarError : public HypothesisError {
 public:
  explicit ConditionStarError(u64 witness)
      : HypothesisError({"condition (∗)"}, "witness x=" + std::to_string(witness)), witness_(witness) {}
  u64 witness() const noexcept { return witness_; }

 private:
  u64 witness_;
};

/// A polynomial family is multiplicatively dependent.
class DependenceError : public HypothesisError {
 public:
  explicit DependenceError(std::vector<i64> witness)
      : HypothesisError({"multiplicative independence"}, "witness " + render(witness)),
        witness_(std::move(witness)) {}
  const std::vector<i64>& witness() const noexcept { return witness_; }

 private:
  static std::string render(const std::vector<i64>& w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(w[i]);
    }
    return s + ")";
  }

  std::vector<i64> witness_;
};

}  // namespace curvestat
