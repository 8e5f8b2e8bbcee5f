#include "odt/elligator.hpp"

namespace odt {

namespace {

const Fe& mont_a() {
    static const Fe a = Fe::from_u64(486662);
    return a;
}

// sqrt(-486664), used by the Montgomery <-> Edwards maps.
const Fe& conv_c() {
    static const Fe c = [] {
        Fe x;
        if (!fe_sqrt(x, fe_neg(Fe::from_u64(486664)))) std::abort();
        return x;
    }();
    return c;
}

Fe mont_rhs(const Fe& u) {
    // u^3 + A u^2 + u
    Fe u2 = fe_sq(u);
    Fe t = fe_mul(u2, u);
    t = fe_add(t, fe_mul(mont_a(), u2));
    return fe_add(t, u);
}

// r <= (q-1)/2, byte compare against f6 ff .. ff 3f.
bool is_canonical_rep(const Bytes32& r) {
    static const Bytes32 half = [] {
        Bytes32 h;
        h.fill(0xff);
        h[31] = 0x3f;
        h[0] = 0xf6;
        return h;
    }();
    for (int i = 31; i >= 0; i--) {
        if (r[i] < half[i]) return true;
        if (r[i] > half[i]) return false;
    }
    return true;
}

}  // namespace

MontPoint elligator_map(const Fe& r) {
    // d = -A / (1 + 2 r^2); the denominator never vanishes because -1/2 is
    // not a square mod q.
    Fe r2 = fe_sq(r);
    Fe den = fe_add(Fe::one(), fe_add(r2, r2));
    Fe d = fe_neg(fe_mul(mont_a(), fe_invert(den)));
    int eps = fe_chi(mont_rhs(d));
    Fe x = (eps == 1) ? d : fe_neg(fe_add(d, mont_a()));
    Fe y0;
    if (!fe_sqrt(y0, mont_rhs(x))) std::abort();  // rhs is a square by choice of branch
    Fe y = (eps == 1) ? fe_neg(y0) : y0;
    return MontPoint{x, y};
}

std::optional<Fe> elligator_inverse(const MontPoint& p) {
    const Fe& a = mont_a();
    if (fe_is_zero(p.u)) return std::nullopt;
    Fe u_plus_a = fe_add(p.u, a);
    if (fe_is_zero(u_plus_a)) return std::nullopt;
    // -2 u (u + A) must be a square.
    Fe t = fe_mul(p.u, u_plus_a);
    if (fe_chi(fe_neg(fe_add(t, t))) != 1) return std::nullopt;

    Fe r2;
    if (!fe_is_odd(p.v)) {
        // principal root: the point came from the eps = -1 branch
        r2 = fe_neg(fe_mul(p.u, fe_invert(fe_add(u_plus_a, u_plus_a))));
    } else {
        r2 = fe_neg(fe_mul(u_plus_a, fe_invert(fe_add(p.u, p.u))));
    }
    Fe r;
    if (!fe_sqrt(r, r2)) std::abort();  // square by the condition above
    Bytes32 rb = fe_tobytes(r);
    if (!is_canonical_rep(rb)) r = fe_neg(r);
    return r;
}

Point mont_to_edwards(const MontPoint& m) {
    if (fe_is_zero(m.u)) {
        // (0, 0) is the order-2 point
        return point_from_affine(Affine{Fe::zero(), fe_neg(Fe::one())});
    }
    Fe u_plus_1 = fe_add(m.u, Fe::one());
    if (fe_is_zero(m.v) || fe_is_zero(u_plus_1)) {
        // exceptional 4-torsion
        return point_from_affine(Affine{fe_sqrt_m1(), Fe::zero()});
    }
    Fe x = fe_mul(fe_mul(conv_c(), m.u), fe_invert(m.v));
    Fe y = fe_mul(fe_sub(m.u, Fe::one()), fe_invert(u_plus_1));
    return point_from_affine(Affine{x, y});
}

MontPoint edwards_to_mont(const Affine& a) {
    Fe u = fe_mul(fe_add(Fe::one(), a.y), fe_invert(fe_sub(Fe::one(), a.y)));
    Fe v = fe_mul(fe_mul(conv_c(), u), fe_invert(a.x));
    return MontPoint{u, v};
}

}  // namespace odt
