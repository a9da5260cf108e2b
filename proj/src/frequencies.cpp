#include "osc/frequencies.hpp"

#include "osc/errors.hpp"

namespace osc {

FrequencyList::FrequencyList(std::vector<Rational> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) throw InvalidSpec("FrequencyList: need at least one frequency");
  doubles_.reserve(lambdas_.size());
  for (auto& l : lambdas_) {
    l.canonicalize();
    if (sgn(l) <= 0) throw InvalidSpec("FrequencyList: frequencies must be > 0, got " + to_string(l));
    doubles_.push_back(l.get_d());
  }
}

std::vector<FrequencyRun> FrequencyList::runs() const {
  std::vector<FrequencyRun> out;
  for (std::size_t i = 0; i < lambdas_.size(); ++i) {
    if (!out.empty() && out.back().rho == lambdas_[i]) {
      ++out.back().size;
    } else {
      out.push_back({i, 1, lambdas_[i]});
    }
  }
  return out;
}

FrequencyList FrequencyList::canonical(std::vector<std::size_t>* permutation) const {
  std::vector<bool> used(lambdas_.size(), false);
  std::vector<Rational> values;
  std::vector<std::size_t> perm;
  for (std::size_t i = 0; i < lambdas_.size(); ++i) {
    if (used[i]) continue;
    for (std::size_t j = i; j < lambdas_.size(); ++j) {
      if (!used[j] && lambdas_[j] == lambdas_[i]) {
        used[j] = true;
        values.push_back(lambdas_[j]);
        perm.push_back(j);
      }
    }
  }
  if (permutation) *permutation = std::move(perm);
  return FrequencyList(std::move(values));
}

}  // namespace osc
