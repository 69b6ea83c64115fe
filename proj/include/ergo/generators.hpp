#pragma once

// Seeded random instances for the property suites. One generator per suite;
// instance i draws from its own stream derived from (seed, i), so results do
// not depend on evaluation order.

#include <cstdint>
#include <random>
#include <string>

#include "ergo/averaging.hpp"
#include "ergo/ds_operator.hpp"
#include "ergo/measure.hpp"

namespace ergo::gen {

using Rng = std::mt19937_64;

Rng instance_rng(std::uint64_t seed, std::uint64_t index);

double uniform(Rng& rng, double lo, double hi);
std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive

/// Weights in [0.1, 2].
SpacePtr random_space(Rng& rng, std::size_t atoms, bool tail);

/// Complex values of modulus <= scale; some atoms zero. Tail value is 0 unless
/// with_tail is set and the space has a tail.
TailedFunction random_function(Rng& rng, const SpacePtr& space, double scale = 1.0,
                               bool with_tail = false);

enum class OperatorFamily { Permutation, BirkhoffMixture, PositiveKernel, ComplexPhase };

std::string to_string(OperatorFamily family);

/// Rescales a nonnegative kernel and tail injection so that both the weighted
/// column bound and the row bound hold with equality at their maxima.
void scale_to_ds(ComplexMatrix& kernel, std::vector<Complex>& tail_injection,
                 const TailedMeasureSpace& space);

DSOperator random_permutation(Rng& rng, const TailedMeasureSpace& space);
DSOperator birkhoff_mixture(Rng& rng, const TailedMeasureSpace& space, std::size_t terms);
DSOperator random_positive(Rng& rng, const TailedMeasureSpace& space, double density = 0.5);
DSOperator complex_phase(Rng& rng, const TailedMeasureSpace& space);
DSOperator random_operator(Rng& rng, const TailedMeasureSpace& space, OperatorFamily family);

/// Cyclic shift on n atoms: (Tf)_i = f_{i-1 mod n}.
DSOperator cyclic_shift(std::size_t n, std::size_t step = 1);

/// A catalog sequence: random trig polynomial (1-3 terms) plus a zero,
/// harmonic or geometric perturbation.
BesicovitchSequence random_besicovitch(Rng& rng);

}  // namespace ergo::gen
