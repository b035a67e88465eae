#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ctrg/free_trg.hpp"
#include "ctrg/tensor4.hpp"
#include "ctrg/wick.hpp"

namespace ctrg {

enum class FieldRole { EvenLattice, DerivSplit, DerivU, DeltaOdd };

struct FieldLabel {
    FieldRole role;
    int level; // generation that created the index
};

struct FieldIndexSpace {
    std::vector<FieldLabel> labels;

    std::size_t size() const { return labels.size(); }
    std::size_t count(FieldRole role) const;
    // First index carrying the role, size() if absent.
    std::size_t offset(FieldRole role) const;

    static FieldIndexSpace vertex_legs(int level, std::size_t chi);
    // (xa, xb, kappa): 2chi even lattice fields and chi' splitting-field derivatives.
    static FieldIndexSpace cubic(int level, std::size_t chi, std::size_t chi_next);
    // (kappa, xa, xb, du1, du2) used by the omega diagnostics.
    static FieldIndexSpace formal(int level, std::size_t chi);
};

// Order-lambda content t0 + t2.zz + t4.zzzz. t4 may be stored with fewer leading rows (t4->n0 < size)
// when only the leading block is needed.
struct PertTensors {
    double t0 = 0.0;
    Mat t2;
    std::shared_ptr<const Tensor4> t4;
    FieldIndexSpace space;
    double c_log = 0.0;

    Polynomial4 polynomial() const;
};

// A term contributes poly(map * x), x the vertex legs (x1, x2, x4, x3) of the level it lives on.
struct PertTerm {
    std::shared_ptr<const PertTensors> poly;
    Mat map;
    int generation = 0;
};

struct PertWeightState {
    FreeWeightState free;
    std::vector<PertTerm> left, right;
    double coupling = 1.0;

    int level() const { return free.level; }
    // Materialize the whole order-lambda vertex polynomial over the 4chi legs. Small chi only.
    PertTensors vertex_tensors(Backend backend = Backend::Parallel) const;
};

struct CubicPayload {
    int level = 0;
    PertTensors left, right;
    Mat s_left, s_right; // cubic variables -> vertex legs
};

// Formal (partially integrated) pieces kept for the omega diagnostics of the next level.
struct FormalTerm {
    Polynomial4 poly; // over the cubic space of the producing level
    Mat ra, rb;       // inner-field dressing rows
    int leg = 1;      // 1 or 2: which derivative carrier the kappa block becomes
};

struct FormalPayload {
    int level = -1; // level whose omega these feed
    std::vector<FormalTerm> terms;
};

struct PertAccumulator {
    int total_levels = 0;
    std::vector<double> t0; // per produced level
    double per_site = 0.0;  // sum N_{n+1} t0_n / N

    explicit PertAccumulator(int levels = 0) : total_levels(levels) {}
    void push(int level, double value);
};

PertWeightState init_pert(double mass, double coupling = 1.0, int potential_degree = 4);

Mat cubic_embedding(const SplitData& split, std::size_t chi, bool left);

CubicPayload split_pert(const PertWeightState& state, const SplitData& split, Backend backend = Backend::Parallel);

// Generic halving of a vertex polynomial whose legs sit on both halves: each copy carries half the
// coefficients with the far legs rewritten through the splitting-field derivative.
std::pair<PertTensors, PertTensors> halve_mixed(const PertTensors& vertex, const Mat& s_left, const Mat& s_right,
                                                Backend backend = Backend::Parallel);

PertWeightState coarse_grain_pert(const PertWeightState& state, const FreeWeightState& next_free,
                                  const SplitData& split, const LoopKernel& kernel, const CubicPayload& cubic,
                                  PertAccumulator* acc = nullptr, FormalPayload* formal = nullptr,
                                  Backend backend = Backend::Parallel);

// Order-lambda part of the torus closure of the last vertex.
double close_pert_trace(const PertWeightState& state, Backend backend = Backend::Parallel);

// Unevaluated cubic over (kappa, xa, xb, du1, du2) at the formal payload's level. Only the rows of the
// kappa block are stored in t4.
PertTensors formal_cubic(const FreeWeightState& state, const FormalPayload& formal,
                         Backend backend = Backend::Parallel);

} // namespace ctrg
