#ifndef NAHMLAB_SAMPLING_HPP
#define NAHMLAB_SAMPLING_HPP

#include "nahmlab/lie.hpp"

#include <cstdint>
#include <random>

namespace nahmlab {

// Deterministic generators for randomized scenarios and property tests.
// Normal deviates go through an explicit Box-Muller so that a seed pins the
// byte-exact output independently of the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                 // [0, 1)
  double normal();
  int uniform_int(int lo, int hi);  // inclusive

  CMatrix su(int n);                   // random su(n) element, O(1) scale
  CMatrix unitary(int n);              // Haar-ish SU(n)
  CMatrix in_span(const std::vector<CMatrix>& basis);
  CMatrix sl(int n);                   // random sl(n, C) element

 private:
  std::mt19937_64 engine_;
};

/// C^4 window supported on [a, b]: proportional to ((t-a)(b-t))^5, peak 1.
double bump(double t, double a, double b);
double bump_derivative(double t, double a, double b);

}  // namespace nahmlab

#endif
