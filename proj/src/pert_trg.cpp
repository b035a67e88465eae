#include "ctrg/pert_trg.hpp"

#include <cmath>
#include <string>

#include "ctrg/errors.hpp"

namespace ctrg {

std::size_t FieldIndexSpace::count(FieldRole role) const {
    std::size_t n = 0;
    for (const auto& l : labels) n += (l.role == role);
    return n;
}

std::size_t FieldIndexSpace::offset(FieldRole role) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i].role == role) return i;
    return labels.size();
}

FieldIndexSpace FieldIndexSpace::vertex_legs(int level, std::size_t chi) {
    FieldIndexSpace s;
    s.labels.assign(4 * chi, {FieldRole::EvenLattice, level});
    return s;
}

FieldIndexSpace FieldIndexSpace::cubic(int level, std::size_t chi, std::size_t chi_next) {
    FieldIndexSpace s;
    s.labels.assign(2 * chi, {FieldRole::EvenLattice, level});
    s.labels.insert(s.labels.end(), chi_next, {FieldRole::DerivSplit, level + 1});
    return s;
}

FieldIndexSpace FieldIndexSpace::formal(int level, std::size_t chi) {
    FieldIndexSpace s;
    s.labels.assign(2 * chi, {FieldRole::DerivSplit, level + 1});
    s.labels.insert(s.labels.end(), 2 * chi, {FieldRole::EvenLattice, level});
    s.labels.insert(s.labels.end(), 2 * chi, {FieldRole::DerivU, level});
    return s;
}

Polynomial4 PertTensors::polynomial() const {
    Polynomial4 p;
    p.c0 = t0;
    p.c2 = t2;
    p.c4 = t4;
    p.phase.assign(t2.rows(), 0);
    return p;
}

void PertAccumulator::push(int level, double value) {
    t0.push_back(value);
    per_site += std::ldexp(value, -level);
}

namespace {

void add_transformed(const PertTensors& p, const Mat& m, Mat& t2, Tensor4* t4, Backend backend) {
    t2 = t2 + transpose(m) * p.t2 * m;
    if (p.t4 && t4) {
        if (p.t4->n0 != p.t4->n) throw InternalInvariantViolation("row-restricted tensor cannot be transformed");
        transform4(*p.t4, m, 1.0, *t4, backend);
    }
}

Mat sigma_block(const Mat& qinv, std::size_t chi, std::size_t ia, std::size_t ib, const std::vector<double>* d) {
    const std::size_t cp = d ? d->size() : 0;
    Mat s(2 * chi + cp, 2 * chi + cp);
    const std::size_t blocks[2] = {ia, ib};
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < chi; ++i)
                for (std::size_t j = 0; j < chi; ++j)
                    s(r * chi + i, c * chi + j) = qinv(blocks[r] * chi + i, blocks[c] * chi + j);
    for (std::size_t i = 0; i < cp; ++i) s(2 * chi + i, 2 * chi + i) = 1.0 / (*d)[i];
    return s;
}

// Column block of leg p1, p2, p4, p3 in the next vertex ordering (x1, x2, x4, x3).
std::size_t leg_block(int leg) {
    switch (leg) {
    case 1: return 0;
    case 2: return 1;
    case 4: return 2;
    default: return 3;
    }
}

Mat dressing(const Mat& r, std::size_t chi, std::size_t ia, std::size_t ib, const std::vector<double>& d, int leg) {
    const std::size_t cp = d.size(), cols = r.cols();
    Mat lam(2 * chi + cp, cols);
    for (std::size_t i = 0; i < chi; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            lam(i, j) = r(ia * chi + i, j);
            lam(chi + i, j) = r(ib * chi + i, j);
        }
    const std::size_t b = leg_block(leg);
    for (std::size_t i = 0; i < cp; ++i) lam(2 * chi + i, b * cp + i) = -1.0 / d[i];
    return lam;
}

double circulant_mismatch(const Mat& qinv, std::size_t chi, std::size_t a1, std::size_t b1, std::size_t a2,
                          std::size_t b2) {
    double err = 0.0, scale = 1e-300;
    const std::size_t p1[2] = {a1, b1}, p2[2] = {a2, b2};
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < chi; ++i)
                for (std::size_t j = 0; j < chi; ++j) {
                    const double x = qinv(p1[r] * chi + i, p1[c] * chi + j);
                    err = std::max(err, std::abs(x - qinv(p2[r] * chi + i, p2[c] * chi + j)));
                    scale = std::max(scale, std::abs(x));
                }
    return err / scale;
}

} // namespace

PertTensors PertWeightState::vertex_tensors(Backend backend) const {
    const std::size_t n = 4 * free.chi;
    PertTensors out;
    out.space = FieldIndexSpace::vertex_legs(free.level, free.chi);
    out.t2 = Mat(n, n);
    auto t4 = std::make_shared<Tensor4>(n);
    for (const auto* side : {&left, &right})
        for (const auto& term : *side) {
            out.t0 += term.poly->t0;
            add_transformed(*term.poly, term.map, out.t2, t4.get(), backend);
        }
    out.t4 = t4;
    return out;
}

PertWeightState init_pert(double mass, double coupling, int potential_degree) {
    if (potential_degree != 4) throw Unsupported("only the quartic potential is implemented");
    if (!std::isfinite(coupling)) throw InvalidConfig("coupling must be finite");
    PertWeightState s;
    s.free = init_free(mass);
    s.coupling = coupling;
    for (int side = 0; side < 2; ++side) {
        auto p = std::make_shared<PertTensors>();
        p->space = FieldIndexSpace::vertex_legs(0, 1);
        p->t2 = Mat(4, 4);
        auto t4 = std::make_shared<Tensor4>(4);
        for (std::size_t i = 2 * static_cast<std::size_t>(side); i < 2 * static_cast<std::size_t>(side) + 2; ++i)
            (*t4)(i, i, i, i) = -0.5 * coupling;
        p->t4 = t4;
        PertTerm term{p, Mat::identity(4), 0};
        (side == 0 ? s.left : s.right).push_back(term);
    }
    return s;
}

Mat cubic_embedding(const SplitData& split, std::size_t chi, bool left) {
    const std::size_t cp = split.chi_next(), d = 2 * chi + cp;
    const Mat u1 = split.upper(), u2 = split.lower();
    Mat s(4 * chi, d);
    for (std::size_t i = 0; i < chi; ++i) {
        s(i, i) = 1.0;
        s(chi + i, chi + i) = 1.0;
        s(2 * chi + i, i) = 1.0;
        s(3 * chi + i, chi + i) = 1.0;
    }
    // L copy: x4 = xa - U1 kappa, x3 = xb - U2 kappa. R copy: x1 = ya + U1 kappa, x2 = yb + U2 kappa.
    const std::size_t r0 = left ? 2 * chi : 0;
    const double sg = left ? -1.0 : 1.0;
    for (std::size_t i = 0; i < chi; ++i)
        for (std::size_t k = 0; k < cp; ++k) {
            s(r0 + i, 2 * chi + k) = sg * u1(i, k);
            s(r0 + chi + i, 2 * chi + k) = sg * u2(i, k);
        }
    return s;
}

CubicPayload split_pert(const PertWeightState& state, const SplitData& split, Backend backend) {
    const std::size_t chi = state.free.chi, cp = split.chi_next(), d = 2 * chi + cp;
    CubicPayload out;
    out.level = state.level();
    out.s_left = cubic_embedding(split, chi, true);
    out.s_right = cubic_embedding(split, chi, false);
    for (int side = 0; side < 2; ++side) {
        const auto& terms = side == 0 ? state.left : state.right;
        const Mat& s = side == 0 ? out.s_left : out.s_right;
        PertTensors& p = side == 0 ? out.left : out.right;
        p.space = FieldIndexSpace::cubic(state.level(), chi, cp);
        p.t2 = Mat(d, d);
        auto t4 = std::make_shared<Tensor4>(d);
        for (const auto& term : terms) {
            if (term.generation != state.level())
                throw OddLifetimeViolation("term of generation " + std::to_string(term.generation) +
                                           " reached level " + std::to_string(state.level()));
            if (term.map.cols() != 4 * chi) throw InternalInvariantViolation("term map does not match vertex");
            p.t0 += term.poly->t0;
            add_transformed(*term.poly, term.map * s, p.t2, t4.get(), backend);
        }
        p.t4 = t4;
    }
    return out;
}

std::pair<PertTensors, PertTensors> halve_mixed(const PertTensors& vertex, const Mat& s_left, const Mat& s_right,
                                                Backend backend) {
    std::pair<PertTensors, PertTensors> out;
    for (int side = 0; side < 2; ++side) {
        const Mat& s = side == 0 ? s_left : s_right;
        PertTensors& p = side == 0 ? out.first : out.second;
        auto t4 = std::make_shared<Tensor4>(s.cols());
        p.t0 = 0.5 * vertex.t0;
        p.t2 = 0.5 * (transpose(s) * vertex.t2 * s);
        if (vertex.t4) transform4(*vertex.t4, s, 0.5, *t4, backend);
        p.t4 = t4;
        p.space = vertex.space;
    }
    return out;
}

PertWeightState coarse_grain_pert(const PertWeightState& state, const FreeWeightState& next_free,
                                  const SplitData& split, const LoopKernel& kernel, const CubicPayload& cubic,
                                  PertAccumulator* acc, FormalPayload* formal, Backend backend) {
    const int level = state.level();
    if (cubic.level != level || next_free.level != level + 1)
        throw InternalInvariantViolation("coarse_grain_pert: levels out of step");
    const std::size_t chi = state.free.chi;
    const Mat r = kernel.qinv * kernel.coupling();

    const double mis = std::max(circulant_mismatch(kernel.qinv, chi, 0, 1, 2, 3),
                                circulant_mismatch(kernel.qinv, chi, 2, 1, 0, 3));
    if (mis > 1e-9) throw StructureViolation("loop propagator is not block circulant: " + std::to_string(mis));

    const Mat sig_l = sigma_block(kernel.qinv, chi, 0, 1, &split.d);
    const Mat sig_r = sigma_block(kernel.qinv, chi, 2, 1, &split.d);
    const WickReduction wl = wick_reduce(cubic.left.polynomial(), sig_l, true, backend);
    const WickReduction wr = wick_reduce(cubic.right.polynomial(), sig_r, true, backend);
    const double t0 = 2.0 * (wl.r0 + wr.r0);

    auto make = [&](const WickReduction& w) {
        auto p = std::make_shared<PertTensors>();
        p->t2 = w.reduced.c2;
        p->t4 = w.reduced.c4;
        p->space = cubic.left.space;
        return std::shared_ptr<const PertTensors>(p);
    };
    const auto pl = make(wl), pr = make(wr);

    PertWeightState next;
    next.free = next_free;
    next.coupling = state.coupling;
    const int gen = level + 1;
    next.left.push_back({pl, dressing(r, chi, 0, 1, split.d, 1), gen});
    next.left.push_back({pr, dressing(r, chi, 2, 1, split.d, 2), gen});
    next.right.push_back({pl, dressing(r, chi, 2, 3, split.d, 3), gen});
    next.right.push_back({pr, dressing(r, chi, 0, 3, split.d, 4), gen});

    if (formal) {
        formal->level = level + 1;
        formal->terms.clear();
        const struct {
            const PertTensors* p;
            std::size_t ia, ib;
            int leg;
        } pos[2] = {{&cubic.left, 0, 1, 1}, {&cubic.right, 2, 1, 2}};
        for (const auto& ps : pos) {
            const Mat sx = sigma_block(kernel.qinv, chi, ps.ia, ps.ib, nullptr);
            Mat sig(ps.p->t2.rows(), ps.p->t2.rows());
            sig.set_block(0, 0, sx);
            FormalTerm ft;
            ft.poly = wick_reduce(ps.p->polynomial(), sig, true, backend).reduced;
            ft.ra = r.block(ps.ia * chi, 0, chi, r.cols());
            ft.rb = r.block(ps.ib * chi, 0, chi, r.cols());
            ft.leg = ps.leg;
            formal->terms.push_back(std::move(ft));
        }
    }
    if (acc) acc->push(level + 1, t0);
    return next;
}

double close_pert_trace(const PertWeightState& state, Backend backend) {
    const Mat f = closure_fold(state.free);
    const SymMatrix k(transpose(f) * state.free.vertex_matrix() * f, 1e-9);
    const Mat g = f * inv_sym(k, 1e-15).mat() * transpose(f);
    double c = 0.0;
    for (const auto* side : {&state.left, &state.right})
        for (const auto& term : *side) {
            const Mat sig = term.map * g * transpose(term.map);
            const PertTensors& p = *term.poly;
            c += p.t0;
            for (std::size_t i = 0; i < sig.rows() * sig.cols(); ++i) c += p.t2.data()[i] * sig.data()[i];
            if (p.t4) c += 3.0 * contract_full(*p.t4, sig, sig, backend);
        }
    return c;
}

PertTensors formal_cubic(const FreeWeightState& state, const FormalPayload& formal, Backend backend) {
    if (formal.level != state.level) throw OddLifetimeViolation("formal payload does not belong to this level");
    const std::size_t chi = state.chi, cp = 2 * chi, dim = 6 * chi;
    const SplitData fs = full_split(state);
    const Mat u1 = fs.upper(), u2 = fs.lower();
    Mat x(4 * chi, dim);
    for (std::size_t i = 0; i < chi; ++i) {
        x(i, cp + i) = 1.0;
        x(chi + i, cp + chi + i) = 1.0;
        x(2 * chi + i, cp + i) = 1.0;
        x(3 * chi + i, cp + chi + i) = 1.0;
        for (std::size_t k = 0; k < cp; ++k) {
            x(2 * chi + i, k) = -u1(i, k);
            x(3 * chi + i, k) = -u2(i, k);
        }
    }
    PertTensors out;
    out.space = FieldIndexSpace::formal(state.level, chi);
    out.t2 = Mat(dim, dim);
    auto t4 = std::make_shared<Tensor4>(cp, dim);
    for (const auto& ft : formal.terms) {
        const std::size_t c = ft.ra.rows(), dd = ft.poly.dim();
        if (dd != 2 * c + chi) throw InternalInvariantViolation("formal term does not match level");
        Mat m(dd, dim);
        m.set_block(0, 0, ft.ra * x);
        m.set_block(c, 0, ft.rb * x);
        const std::size_t du = 2 * cp + (ft.leg == 1 ? 0 : chi);
        for (std::size_t i = 0; i < chi; ++i) m(2 * c + i, du + i) = 1.0;
        out.t2 = out.t2 + transpose(m) * ft.poly.c2 * m;
        if (ft.poly.c4) transform4(*ft.poly.c4, m.block(0, 0, dd, cp), m, 1.0, *t4, backend);
    }
    out.t4 = t4;
    return out;
}

} // namespace ctrg
