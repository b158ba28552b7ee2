#pragma once

#include <cstdint>
#include <vector>

#include "qnn/polynomial.hpp"

namespace qnn {

/// Inputs with one scalar target each (regression value or +/-1 label).
struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;

  std::size_t size() const { return inputs.size(); }
  std::size_t input_dim() const { return inputs.empty() ? 0 : inputs.front().size(); }
};

/// Throws InvalidInput on length mismatch, ragged inputs or an empty set.
void validate(const Dataset& data);

/// Two concentric rings in the plane, n_per_class points each. The inner ring
/// (radius r_inner) is labelled +1, the outer ring -1. Radii are jittered
/// uniformly by up to +/- noise; angles are uniform.
Dataset make_rings_dataset(std::size_t n_per_class, double r_inner,
                           double r_outer, double noise, std::uint64_t seed);

/// Signed indicator sum over disjoint annuli: eps_i on [edges[2i],
/// edges[2i+1]), zero elsewhere.
struct AnnuliTarget {
  std::vector<double> edges;
  std::vector<double> signs;
  double radius = 1.0;

  double operator()(double t) const;
};

/// `count` annuli with edges drawn uniformly in [0, radius] and random signs.
AnnuliTarget make_random_annuli(std::size_t count, double radius,
                                std::uint64_t seed);

/// n points uniform in the ball of the target's radius in `dim` dimensions,
/// labelled by the target at ||x||.
Dataset make_annuli_dataset(const AnnuliTarget& target, std::size_t dim,
                            std::size_t n, std::uint64_t seed);

/// n evenly spaced samples of p on [lo, hi], endpoints included.
Dataset make_poly_dataset(const Polynomial& p, double lo, double hi,
                          std::size_t n);

}  // namespace qnn
