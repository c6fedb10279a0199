#include "chernoff_lab/shift_mixture.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace chernoff_lab {

namespace {

bool offsets_coincide(double a, double b) {
    return std::abs(a - b) <=
           ShiftMixture::merge_tolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_finite(const std::vector<Atom>& atoms) {
    for (const Atom& a : atoms)
        if (!std::isfinite(a.offset) || !std::isfinite(a.weight))
            throw std::invalid_argument("ShiftMixture: non-finite offset or weight");
}

// Merge runs of coincident offsets in an ascending-sorted list. Each run is
// anchored at its first (smallest) offset so chains of ulp-sized gaps cannot
// creep.
std::vector<Atom> merge_sorted(const std::vector<Atom>& sorted) {
    std::vector<Atom> merged;
    merged.reserve(sorted.size());
    std::size_t i = 0;
    while (i < sorted.size()) {
        Atom run = sorted[i];
        std::size_t j = i + 1;
        while (j < sorted.size() && offsets_coincide(sorted[i].offset, sorted[j].offset)) {
            run.weight += sorted[j].weight;
            ++j;
        }
        merged.push_back(run);
        i = j;
    }
    return merged;
}

std::vector<Atom> prune(std::vector<Atom> merged) {
    std::vector<Atom> kept;
    kept.reserve(merged.size());
    for (const Atom& a : merged)
        if (std::abs(a.weight) >= ShiftMixture::weight_floor) kept.push_back(a);
    if (kept.empty()) kept.push_back(merged.front());  // keep a single ~zero atom
    return kept;
}

// Both atom lists sit on a common uniform lattice whose spacing safely
// dominates the merge tolerance. This is the shape of every power of the
// built-in heat families, and lets convolution run as a coefficient product
// instead of a pairwise merge.
bool uniform_spacing(const std::vector<Atom>& v, double& h) {
    if (v.size() < 2) return false;
    h = v[1].offset - v[0].offset;
    for (std::size_t i = 2; i < v.size(); ++i) {
        const double d = v[i].offset - v[i - 1].offset;
        if (std::abs(d - h) > 1e-9 * h) return false;
    }
    return true;
}

bool lattice_compatible(const std::vector<Atom>& a, const std::vector<Atom>& b, double& h) {
    double ha = 0.0, hb = 0.0;
    if (!uniform_spacing(a, ha) || !uniform_spacing(b, hb)) return false;
    if (std::abs(ha - hb) > 1e-9 * std::max(ha, hb)) return false;
    h = ha;
    const double edge = std::max(std::abs(a.front().offset + b.front().offset),
                                 std::abs(a.back().offset + b.back().offset));
    return h > 1e3 * ShiftMixture::merge_tolerance * std::max(1.0, edge);
}

// Product atoms on the shared lattice: the k-th output offset is realized as
// an actual pair sum (so it lands within an ulp of what pairwise merging
// would produce), the weight is the ascending-i diagonal sum.
std::vector<Atom> convolve_lattice(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    const std::size_t na = a.size(), nb = b.size();
    std::vector<Atom> out;
    out.reserve(na + nb - 1);
    for (std::size_t k = 0; k + 1 <= na + nb - 1; ++k) {
        const std::size_t i_lo = k >= nb ? k - (nb - 1) : 0;
        const std::size_t i_hi = std::min(k, na - 1);
        double w = 0.0;
        for (std::size_t i = i_lo; i <= i_hi; ++i) w += a[i].weight * b[k - i].weight;
        out.push_back({a[i_hi].offset + b[k - i_hi].offset, w});
    }
    return out;
}

// General fallback: stream the pair sums in ascending order through a k-way
// merge (one cursor per atom of the smaller list), merging coincident runs on
// the fly so memory stays proportional to the result, never to the pair count.
std::vector<Atom> convolve_streaming(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    struct Cursor {
        double off;
        std::size_t i, j;
    };
    auto later = [](const Cursor& lhs, const Cursor& rhs) {
        if (lhs.off != rhs.off) return lhs.off > rhs.off;
        if (lhs.i != rhs.i) return lhs.i > rhs.i;  // deterministic tie-break
        return lhs.j > rhs.j;
    };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(later)> heap(later);
    for (std::size_t i = 0; i < a.size(); ++i)
        heap.push({a[i].offset + b[0].offset, i, 0});

    std::vector<Atom> merged;
    bool open = false;
    Atom run{};
    while (!heap.empty()) {
        const Cursor c = heap.top();
        heap.pop();
        const double w = a[c.i].weight * b[c.j].weight;
        if (open && offsets_coincide(run.offset, c.off)) {
            run.weight += w;
        } else {
            if (open) {
                if (merged.size() >= ShiftMixture::atom_cap)
                    throw AtomCapError("ShiftMixture::convolve: result exceeds the cap of " +
                                       std::to_string(ShiftMixture::atom_cap) + " atoms");
                merged.push_back(run);
            }
            run = {c.off, w};
            open = true;
        }
        if (c.j + 1 < b.size()) heap.push({a[c.i].offset + b[c.j + 1].offset, c.i, c.j + 1});
    }
    merged.push_back(run);
    return merged;
}

}  // namespace

ShiftMixture ShiftMixture::make(std::vector<Atom> atoms) {
    if (atoms.empty())
        throw std::invalid_argument("ShiftMixture::make: empty atom list");
    check_finite(atoms);
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.offset < b.offset; });
    return ShiftMixture(prune(merge_sorted(atoms)));
}

ShiftMixture ShiftMixture::identity() { return make({{0.0, 1.0}}); }

ShiftMixture ShiftMixture::convolve(const ShiftMixture& m1, const ShiftMixture& m2) {
    const std::vector<Atom>& a = m1.atoms_;
    const std::vector<Atom>& b = m2.atoms_;
    std::vector<Atom> merged;
    double h = 0.0;
    if (a.size() == 1 || b.size() == 1) {
        const Atom& single = a.size() == 1 ? a.front() : b.front();
        const std::vector<Atom>& other = a.size() == 1 ? b : a;
        std::vector<Atom> shifted;
        shifted.reserve(other.size());
        for (const Atom& x : other)
            shifted.push_back({x.offset + single.offset, x.weight * single.weight});
        merged = merge_sorted(shifted);  // a shift can push distinct offsets within tolerance
    } else if (lattice_compatible(a, b, h)) {
        if (a.size() + b.size() - 1 > atom_cap)
            throw AtomCapError("ShiftMixture::convolve: result would have " +
                               std::to_string(a.size() + b.size() - 1) +
                               " atoms, exceeding the cap of " + std::to_string(atom_cap));
        merged = merge_sorted(convolve_lattice(a, b));
    } else if (a.size() * b.size() <= (std::size_t{1} << 20)) {
        std::vector<Atom> products;
        products.reserve(a.size() * b.size());
        for (const Atom& x : a)
            for (const Atom& y : b)
                products.push_back({x.offset + y.offset, x.weight * y.weight});
        std::sort(products.begin(), products.end(),
                  [](const Atom& p, const Atom& q) { return p.offset < q.offset; });
        merged = merge_sorted(products);
    } else {
        merged = convolve_streaming(a, b);
    }
    if (merged.size() > atom_cap)
        throw AtomCapError("ShiftMixture::convolve: result has " +
                           std::to_string(merged.size()) +
                           " atoms, exceeding the cap of " + std::to_string(atom_cap));
    check_finite(merged);
    return ShiftMixture(prune(std::move(merged)));
}

ShiftMixture ShiftMixture::power(const ShiftMixture& m, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("ShiftMixture::power: n must be >= 1");
    try {
        ShiftMixture result = identity();
        ShiftMixture base = m;
        std::int64_t remaining = n;
        while (remaining > 0) {
            if (remaining & 1) result = convolve(result, base);
            remaining >>= 1;
            if (remaining > 0) base = convolve(base, base);
        }
        return result;
    } catch (const AtomCapError& e) {
        throw AtomCapError("ShiftMixture::power(n=" + std::to_string(n) +
                           ", cap=" + std::to_string(atom_cap) + "): " + e.what());
    }
}

double ShiftMixture::operator_norm() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += std::abs(a.weight);
    return s;
}

double ShiftMixture::moment(int k) const {
    if (k < 0) throw std::invalid_argument("ShiftMixture::moment: k must be >= 0");
    double s = 0.0;
    for (const Atom& a : atoms_) {
        double p = 1.0;
        for (int j = 0; j < k; ++j) p *= a.offset;
        s += a.weight * p;
    }
    return s;
}

std::complex<double> ShiftMixture::charfn(double k) const {
    std::complex<double> s = 0.0;
    for (const Atom& a : atoms_)
        s += a.weight * std::complex<double>(std::cos(k * a.offset), std::sin(k * a.offset));
    return s;
}

}  // namespace chernoff_lab
