#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "chernoff_lab/errors.hpp"

namespace chernoff_lab {

struct Atom {
    double offset = 0.0;  // spatial shift
    double weight = 0.0;  // signed, dimensionless
};

/// A finite weighted set of translation offsets. Applying it to a function f
/// gives sum_i w_i f(x + s_i); composing two such operators adds offsets and
/// multiplies weights. Every operator family in this library is of this form,
/// so n-fold operator powers are exact convolution powers of the atom list.
///
/// Immutable after construction; atoms are kept sorted by ascending offset
/// with near-coincident offsets merged (see merge_tolerance).
class ShiftMixture {
public:
    /// Offsets s, s' merge when |s - s'| <= merge_tolerance * max(1, |s|, |s'|).
    static constexpr double merge_tolerance = 1e-12;
    /// Weights below this magnitude are dropped after merging (underflow hygiene).
    static constexpr double weight_floor = 1e-300;
    /// Hard limit on atoms produced by convolve/power; exceeding it is an error,
    /// never a silent truncation.
    static constexpr std::size_t atom_cap = 2'000'001;

    /// Builds a mixture from (offset, weight) pairs: sorts, merges coincident
    /// offsets by summing weights, prunes underflowed weights. Throws
    /// std::invalid_argument on an empty list or non-finite values.
    static ShiftMixture make(std::vector<Atom> atoms);

    /// The identity operator {(0, 1)}.
    static ShiftMixture identity();

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    /// sum_i w_i f(x + s_i), accumulated in ascending-offset order.
    /// Throws EvaluationError if the result is not finite.
    template <class F>
    double apply(F&& f, double x) const {
        double acc = 0.0;
        for (const Atom& a : atoms_) acc += a.weight * f(x + a.offset);
        if (!std::isfinite(acc))
            throw EvaluationError("ShiftMixture::apply: non-finite value at x=" + std::to_string(x));
        return acc;
    }

    /// Operator composition: atoms {(s_i + r_j, w_i * v_j)} merged as in make.
    /// Commutative; identity() is a two-sided unit. Throws AtomCapError when
    /// the product would exceed atom_cap atoms.
    static ShiftMixture convolve(const ShiftMixture& m1, const ShiftMixture& m2);

    /// n-fold convolution of m with itself, by binary exponentiation.
    /// Throws std::invalid_argument for n < 1, AtomCapError (naming n and the
    /// cap) when an intermediate product would exceed the cap.
    static ShiftMixture power(const ShiftMixture& m, std::int64_t n);

    /// Operator norm on the sup-norm space: sum_i |w_i|.
    double operator_norm() const;

    /// k-th moment sum_i w_i s_i^k; moment(0) is the total weight.
    double moment(int k) const;

    /// Characteristic function sum_j w_j exp(i k s_j).
    std::complex<double> charfn(double k) const;

private:
    explicit ShiftMixture(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
    std::vector<Atom> atoms_;
};

}  // namespace chernoff_lab
