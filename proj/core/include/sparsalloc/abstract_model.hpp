#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sparsalloc {

// Per-layer error contribution f(s), strictly increasing on [0,1] with f(0)=0.
struct ErrorFamily {
  enum class Kind { Square, Ratio, Exp };

  Kind kind = Kind::Square;
  double param = 0.0;  // Ratio: epsilon > 0, Exp: k > 0

  static ErrorFamily square() { return {Kind::Square, 0.0}; }
  // s / (1 - s + eps)
  static ErrorFamily ratio(double eps);
  // exp(k s) - 1
  static ErrorFamily exp(double k);

  double operator()(double s) const;
  std::string name() const;
};

struct AbstractErrorParams {
  double c = 1.5;  // propagation factor, > 1
  ErrorFamily f = ErrorFamily::square();

  // DomainError unless c > 1 and the family parameter is valid.
  void validate() const;
};

struct RecurrenceResult {
  std::vector<double> per_layer;
  double total = 0.0;
};

// L_1 = f(s_1), L_{i+1} = c L_i + f(s_{i+1}).
RecurrenceResult recurrence_total(const std::vector<double>& rates, const AbstractErrorParams& params);

// total(rates) - total(rates with positions k and k+1 exchanged); k is
// 0-based and k + 1 < L. Equals c^(L-1-k) [f(s_k) - f(s_{k+1})], which is
// c [f(s_k) - f(s_{k+1})] when the pair is the last two layers.
double swap_gain(const std::vector<double>& rates, std::size_t k, const AbstractErrorParams& params);

struct RankedOrdering {
  std::vector<std::size_t> permutation;  // position -> index into the sorted multiset
  std::vector<double> rates;
  double total = 0.0;
};

struct Theorem4Report {
  std::vector<RankedOrdering> ranking;  // ascending by total, ties by permutation order
  bool all_equal = false;               // rates multiset has one distinct value
  bool ascending_is_strict_minimum = false;
  std::size_t counterexamples = 0;  // non-ascending orderings with total <= ascending total
  double ascending_total = 0.0;
};

// Exhaustive check over every distinct ordering (SizeError above 8 layers).
Theorem4Report verify_theorem4(const std::vector<double>& rates, const AbstractErrorParams& params);

// Adjacent-swap descent: repeatedly exchange the first out-of-order pair until
// sorted ascending. Returns the total after every step, starting value first.
std::vector<double> bubble_descent(std::vector<double> rates, const AbstractErrorParams& params);

// CSV with columns permutation,total; the permutation is a space-separated
// index list into the sorted multiset.
std::string theorem4_to_csv(const Theorem4Report& report, const std::string& metadata);

}  // namespace sparsalloc
