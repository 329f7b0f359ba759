#include "sparsalloc/abstract_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sparsalloc/allocator.hpp"
#include "sparsalloc/csv.hpp"
#include "sparsalloc/errors.hpp"

namespace sparsalloc {

ErrorFamily ErrorFamily::ratio(double eps) {
  if (!(eps > 0.0)) throw DomainError("ratio family needs eps > 0");
  return {Kind::Ratio, eps};
}

ErrorFamily ErrorFamily::exp(double k) {
  if (!(k > 0.0)) throw DomainError("exp family needs k > 0");
  return {Kind::Exp, k};
}

double ErrorFamily::operator()(double s) const {
  switch (kind) {
    case Kind::Square: return s * s;
    case Kind::Ratio: return s / (1.0 - s + param);
    case Kind::Exp: return std::expm1(param * s);
  }
  return 0.0;
}

std::string ErrorFamily::name() const {
  switch (kind) {
    case Kind::Square: return "square";
    case Kind::Ratio: return "ratio(" + format_double(param) + ")";
    case Kind::Exp: return "exp(" + format_double(param) + ")";
  }
  return "unknown";
}

void AbstractErrorParams::validate() const {
  if (!(c > 1.0)) throw DomainError("propagation factor c must exceed 1");
  if (f.kind != ErrorFamily::Kind::Square && !(f.param > 0.0)) throw DomainError("error family parameter must be > 0");
}

RecurrenceResult recurrence_total(const std::vector<double>& rates, const AbstractErrorParams& params) {
  params.validate();
  RecurrenceResult r;
  r.per_layer.reserve(rates.size());
  double prev = 0.0;
  for (double s : rates) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("recurrence_total: rate outside [0,1]");
    prev = params.c * prev + params.f(s);
    r.per_layer.push_back(prev);
    r.total += prev;
  }
  return r;
}

double swap_gain(const std::vector<double>& rates, std::size_t k, const AbstractErrorParams& params) {
  if (k + 1 >= rates.size()) throw DomainError("swap_gain: index out of range");
  auto swapped = rates;
  std::swap(swapped[k], swapped[k + 1]);
  return recurrence_total(rates, params).total - recurrence_total(swapped, params).total;
}

Theorem4Report verify_theorem4(const std::vector<double>& rates, const AbstractErrorParams& params) {
  params.validate();
  if (rates.empty()) throw DomainError("verify_theorem4: no rates");
  auto sorted = rates;
  std::sort(sorted.begin(), sorted.end());

  Theorem4Report report;
  report.all_equal = sorted.front() == sorted.back();
  report.ascending_total = recurrence_total(sorted, params).total;

  for_each_permutation(rates, [&](const std::vector<double>& order) {
    RankedOrdering ro;
    ro.rates = order;
    ro.total = recurrence_total(order, params).total;
    // Map each value back to a slot of the sorted multiset, duplicates in turn.
    std::map<double, std::size_t> next_slot;
    for (double v : order) {
      auto [it, fresh] = next_slot.try_emplace(v, 0);
      const auto first = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
      ro.permutation.push_back(first + it->second++);
    }
    if (order != sorted && ro.total <= report.ascending_total) ++report.counterexamples;
    report.ranking.push_back(std::move(ro));
  });
  report.ascending_is_strict_minimum = !report.all_equal && report.counterexamples == 0;
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [](const RankedOrdering& a, const RankedOrdering& b) { return a.total < b.total; });
  return report;
}

std::vector<double> bubble_descent(std::vector<double> rates, const AbstractErrorParams& params) {
  std::vector<double> totals{recurrence_total(rates, params).total};
  for (;;) {
    const auto it = std::adjacent_find(rates.begin(), rates.end(), std::greater<>());
    if (it == rates.end()) break;
    std::iter_swap(it, it + 1);
    totals.push_back(recurrence_total(rates, params).total);
  }
  return totals;
}

std::string theorem4_to_csv(const Theorem4Report& report, const std::string& metadata) {
  CsvWriter csv({"permutation", "total"});
  for (const auto& ro : report.ranking) {
    std::string perm;
    for (std::size_t i = 0; i < ro.permutation.size(); ++i) {
      if (i) perm += ' ';
      perm += std::to_string(ro.permutation[i]);
    }
    csv.row({perm, format_double(ro.total)});
  }
  return csv.finish(metadata);
}

}  // namespace sparsalloc
