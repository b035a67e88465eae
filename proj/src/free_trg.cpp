#include "ctrg/free_trg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctrg/errors.hpp"

namespace ctrg {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Mat halves_matrix(const FreeWeightState& s, const Mat& a) {
    const std::size_t c = s.chi;
    Mat full(2 * c, 2 * c);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            full(i, j) = a(i, j);
            full(i + c, j + c) = a(i, j);
            full(i, j + c) = -a(i, j);
            full(i + c, j) = -a(i, j);
        }
    return full;
}

} // namespace

Mat FreeWeightState::full_a() const {
    Mat full = halves_matrix(*this, a);
    for (std::size_t i = 0; i < chi; ++i) {
        full(i, i) += 0.5 * dinv_prev[i];
        full(i + chi, i + chi) += 0.5 * dinv_prev[i];
    }
    return full;
}

Mat FreeWeightState::vertex_matrix() const {
    const Mat A = full_a();
    const std::size_t n = 2 * chi;
    Mat m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double bij = b(i, j);
            m(i, j) = A(i, j) + bij;
            m(i + n, j + n) = A(i, j) + bij;
            m(i, j + n) = -bij;
            m(i + n, j) = -bij;
        }
    return m;
}

Mat SplitData::u() const {
    std::size_t k = 0;
    for (int s : sector) k += (s == 0);
    Mat out(e.rows(), k);
    std::size_t col = 0;
    for (std::size_t j = 0; j < sector.size(); ++j)
        if (sector[j] == 0) {
            for (std::size_t i = 0; i < e.rows(); ++i) out(i, col) = e(i, j);
            ++col;
        }
    return out;
}

Mat SplitData::v() const {
    std::size_t k = 0;
    for (int s : sector) k += (s == 1);
    Mat out(e.rows(), k);
    std::size_t col = 0;
    for (std::size_t j = 0; j < sector.size(); ++j)
        if (sector[j] == 1) {
            for (std::size_t i = 0; i < e.rows(); ++i) out(i, col) = e(i, j);
            ++col;
        }
    return out;
}

Mat SplitData::upper() const { return kInvSqrt2 * e; }

Mat SplitData::lower() const {
    Mat l = kInvSqrt2 * e;
    for (std::size_t j = 0; j < sector.size(); ++j)
        if (sector[j] == 1)
            for (std::size_t i = 0; i < l.rows(); ++i) l(i, j) = -l(i, j);
    return l;
}

Mat LoopKernel::coupling() const {
    Mat c(c_left.rows(), c_left.cols() + c_right.cols());
    c.set_block(0, 0, c_left);
    c.set_block(0, c_left.cols(), c_right);
    return c;
}

void FreeEnergyAccumulator::push(int level, double log_const) {
    const double weight = std::ldexp(1.0, -level);
    per_level_log.push_back({level, log_const, std::ldexp(1.0, total_levels - level)});
    per_site += weight * log_const;
}

double FreeEnergyAccumulator::total_sites() const { return std::ldexp(1.0, total_levels); }

FreeWeightState init_free(double mass) {
    if (!(mass >= 0.0) || !std::isfinite(mass)) throw InvalidConfig("mass must be finite and non-negative");
    FreeWeightState s;
    s.level = 0;
    s.chi = 1;
    s.dinv_prev = {mass * mass};
    s.a = Mat(1, 1, 1.0);
    s.b = SymMatrix::identity(2);
    s.sector = {-1};
    return s;
}

SplitData split_weight(const FreeWeightState& state, std::size_t chi_max, double zero_tol) {
    const std::size_t c = state.chi;
    if (state.b.dim() != 2 * c) throw InternalInvariantViolation("b has wrong dimension");
    Mat sym(c, c), anti(c, c);
    double dev = 0.0;
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const double b1 = state.b(i, j), b2 = state.b(i, j + c);
            dev = std::max({dev, std::abs(b1 - state.b(i + c, j + c)), std::abs(b2 - state.b(i + c, j))});
            sym(i, j) = b1 + b2;
            anti(i, j) = b1 - b2;
        }
    if (dev > 1e-9 * std::max(max_abs(state.b.mat()), 1e-300))
        throw StructureViolation("b is not of the form [[b1,b2],[b2,b1]], deviation " + std::to_string(dev));

    const SymSpectrum es = eig_sym(SymMatrix(sym));
    const SymSpectrum ea = eig_sym(SymMatrix(anti));
    struct Cand {
        double value;
        int sector;
        std::size_t col;
    };
    std::vector<Cand> all;
    for (std::size_t k = 0; k < c; ++k) all.push_back({es.values[k], 0, k});
    for (std::size_t k = 0; k < c; ++k) all.push_back({ea.values[k], 1, k});
    std::stable_sort(all.begin(), all.end(), [](const Cand& x, const Cand& y) { return x.value > y.value; });

    SplitData sd;
    for (const auto& cd : all) sd.spectrum.push_back(cd.value);
    const double top = all.front().value;
    std::vector<Cand> kept;
    if (zero_tol < 0.0) {
        kept = all;
    } else {
        if (!(top > 0.0)) throw DegenerateWeight("all singular values vanish");
        int nonzero = 0;
        for (const auto& cd : all)
            if (cd.value > zero_tol * top) ++nonzero;
        sd.discarded_zero_count = static_cast<int>(all.size()) - nonzero;
        const std::size_t keep = std::min<std::size_t>(chi_max, static_cast<std::size_t>(nonzero));
        kept.assign(all.begin(), all.begin() + static_cast<long>(keep));
        sd.truncated_count = nonzero - static_cast<int>(keep);
    }
    sd.kept_count = static_cast<int>(kept.size());
    sd.e = Mat(c, kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j) {
        const Mat& vec = kept[j].sector == 0 ? es.vectors : ea.vectors;
        for (std::size_t i = 0; i < c; ++i) sd.e(i, j) = vec(i, kept[j].col);
        sd.d.push_back(kept[j].value);
        sd.sector.push_back(kept[j].sector);
    }
    if (zero_tol >= 0.0) {
        double s = static_cast<double>(kept.size()) * kLog2Pi;
        for (double x : sd.d) s += std::log(x);
        sd.log_rho = 0.5 * s;
    }
    return sd;
}

SplitData full_split(const FreeWeightState& state) {
    return split_weight(state, std::numeric_limits<std::size_t>::max(), -1.0);
}

LoopKernel build_loop(const FreeWeightState& state, const SplitData& split) {
    const std::size_t c = state.chi, cp = split.chi_next();
    if (split.e.rows() != c || state.a.rows() != c || state.dinv_prev.size() != c)
        throw InternalInvariantViolation("split does not match state");
    static const int circ[4][4] = {{2, -1, 0, -1}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {-1, 0, -1, 2}};
    LoopKernel k;
    k.q = SymMatrix(4 * c);
    for (std::size_t bi = 0; bi < 4; ++bi)
        for (std::size_t bj = bi; bj < 4; ++bj)
            for (std::size_t i = 0; i < c; ++i)
                for (std::size_t j = 0; j < c; ++j) {
                    double v = circ[bi][bj] * state.a(i, j);
                    if (bi == bj && i == j) v += state.dinv_prev[i];
                    if (bi == bj && j < i) continue;
                    k.q.set(bi * c + i, bj * c + j, v);
                }

    k.c_left = Mat(4 * c, 2 * cp);
    k.c_right = Mat(4 * c, 2 * cp);
    for (std::size_t j = 0; j < cp; ++j) {
        const double sg = split.sector[j] == 1 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < c; ++i) {
            const double e = kInvSqrt2 * split.e(i, j);
            k.c_left(0 * c + i, j) = e;
            k.c_left(1 * c + i, j) = sg * e;
            k.c_left(1 * c + i, cp + j) = -sg * e;
            k.c_left(2 * c + i, cp + j) = -e;
            k.c_right(0 * c + i, j) = -e;
            k.c_right(3 * c + i, j) = -sg * e;
            k.c_right(2 * c + i, cp + j) = e;
            k.c_right(3 * c + i, cp + j) = sg * e;
        }
    }
    const InverseLogdet il = inv_logdet_sym(k.q, 1e-15);
    k.qinv = il.inverse.mat();
    k.logdet_q = il.logdet;
    return k;
}

FreeWeightState coarse_grain_free(const FreeWeightState& state, const SplitData& split, const LoopKernel& kernel,
                                  FreeEnergyAccumulator* acc, double structure_tol) {
    const std::size_t c = state.chi, cp = split.chi_next();
    if (kernel.c_left.rows() != 4 * c || kernel.c_left.cols() != 2 * cp)
        throw InternalInvariantViolation("kernel does not match split");
    const Mat qcl = kernel.qinv * kernel.c_left;
    const Mat qcr = kernel.qinv * kernel.c_right;
    const Mat clt = transpose(kernel.c_left);
    const Mat ll = clt * qcl;
    const Mat lr = clt * qcr;

    Mat big = ll + lr;
    for (std::size_t i = 0; i < cp; ++i) {
        big(i, i) += 0.5 / split.d[i];
        big(i + cp, i + cp) += 0.5 / split.d[i];
    }
    FreeWeightState next;
    next.level = state.level + 1;
    next.chi = cp;
    next.sector = split.sector;
    next.dinv_prev.resize(cp);
    for (std::size_t i = 0; i < cp; ++i) next.dinv_prev[i] = 1.0 / split.d[i];
    next.a = Mat(cp, cp);
    for (std::size_t i = 0; i < cp; ++i)
        for (std::size_t j = 0; j < cp; ++j) next.a(i, j) = big(i, j) - (i == j ? 0.5 / split.d[i] : 0.0);

    double err = 0.0;
    for (std::size_t i = 0; i < cp; ++i)
        for (std::size_t j = 0; j < cp; ++j) {
            err = std::max(err, std::abs(big(i, j + cp) + next.a(i, j)));
            err = std::max(err, std::abs(big(i + cp, j) + next.a(i, j)));
            err = std::max(err, std::abs(big(i + cp, j + cp) - big(i, j)));
            err = std::max(err, std::abs(lr(i, j) - lr(i + cp, j + cp)));
            err = std::max(err, std::abs(lr(i, j + cp) - lr(i + cp, j)));
        }
    const double scale = std::max(max_abs(big), 1e-300);
    next.structure_error = err / scale;
    if (next.structure_error > structure_tol)
        throw StructureViolation("A/B block structure deviates by " + std::to_string(next.structure_error) +
                                 " at level " + std::to_string(next.level));
    next.b = SymMatrix((-1.0) * lr, 1e-9);

    next.log_norm = -2.0 * split.log_rho + 2.0 * static_cast<double>(c) * kLog2Pi - 0.5 * kernel.logdet_q;
    if (acc) acc->push(next.level, next.log_norm);
    return next;
}

Mat closure_fold(const FreeWeightState& state) {
    const std::size_t c = state.chi;
    Mat f(4 * c, 2 * c);
    for (std::size_t i = 0; i < c; ++i) {
        const double s = state.sector[i] == 0 ? -1.0 : 1.0;
        f(i, i) = 1.0;
        f(c + i, c + i) = 1.0;
        f(2 * c + i, c + i) = s;
        f(3 * c + i, i) = s;
    }
    return f;
}

double close_trace(const FreeWeightState& state) {
    const Mat f = closure_fold(state);
    const SymMatrix k(transpose(f) * state.vertex_matrix() * f, 1e-9);
    try {
        return static_cast<double>(state.chi) * kLog2Pi - 0.5 * logdet_sym(k, 1e-15);
    } catch (const SingularMatrix& e) {
        throw NonNormalizableTrace(e.what());
    }
}

} // namespace ctrg
