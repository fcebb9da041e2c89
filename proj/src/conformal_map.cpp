#include "loewner/conformal_map.hpp"

#include <cmath>

namespace loewner {

Jet3 jet_compose(const Jet3& outer, const Jet3& inner) {
    Jet3 h;
    const Complex g1 = inner.f1, g2 = inner.f2, g3 = inner.f3;
    h.f = outer.f;
    h.f1 = outer.f1 * g1;
    h.f2 = outer.f2 * g1 * g1 + outer.f1 * g2;
    h.f3 = outer.f3 * g1 * g1 * g1 + 3.0 * outer.f2 * g1 * g2 + outer.f1 * g3;
    return h;
}

Complex jet_schwarzian(const Jet3& jet) {
    if (jet.f1 == Complex(0.0, 0.0))
        throw DegenerateError("schwarzian at a critical point");
    Complex q = jet.f2 / jet.f1;
    return jet.f3 / jet.f1 - 1.5 * q * q;
}

namespace {

Jet3 mobius_jet(const Mobius& m, const Complex& z) {
    const Complex den = m.c * z + m.d;
    if (den == Complex(0.0, 0.0)) throw DomainError("Mobius pole");
    const Complex det = m.a * m.d - m.b * m.c;
    const Complex den2 = den * den;
    Jet3 j;
    j.f = (m.a * z + m.b) / den;
    j.f1 = det / den2;
    j.f2 = -2.0 * m.c * det / (den2 * den);
    j.f3 = 6.0 * m.c * m.c * det / (den2 * den2);
    return j;
}

// Forward slit map u + sqrt((z-u)^2 + 4 dt). Written with the principal
// branch of sqrt(1 + 4dt/(z-u)^2), which is analytic exactly on H minus the
// slit and keeps the hydrodynamic normalization stable at large |z|.
Jet3 forward_slit_jet(const CenteredVerticalSlit& s, const Complex& z) {
    const Complex w = z - s.u;
    Jet3 j;
    if (s.dt == 0.0) {
        j.f = z;
        j.f1 = 1.0;
        return j;
    }
    Complex root; // sqrt((z-u)^2 + 4 dt), branch continuous on H \ slit
    const double aw = std::abs(w);
    if (aw == 0.0) {
        root = 2.0 * std::sqrt(s.dt); // base point: right-side limit
    } else {
        root = w * sqrt_principal(1.0 + 4.0 * s.dt / (w * w));
    }
    j.f = s.u + root;
    if (root == Complex(0.0, 0.0)) throw DomainError("slit map at branch point");
    j.f1 = w / root;
    const Complex r3 = root * root * root;
    j.f2 = 4.0 * s.dt / r3;
    j.f3 = -12.0 * s.dt * w / (r3 * root * root);
    return j;
}

// Inverse slit map u + sqrt((z-u)^2 - 4 dt), branch cut [0,inf) so the map
// takes H into H and grows the slit at u.
Jet3 inverse_slit_jet(const InverseVerticalSlit& s, const Complex& z) {
    const Complex w = z - s.u;
    Jet3 j;
    if (s.dt == 0.0) {
        j.f = z;
        j.f1 = 1.0;
        return j;
    }
    Complex root;
    if (std::abs(w) == 0.0) {
        root = Complex(0.0, 2.0 * std::sqrt(s.dt)); // tip of the slit
    } else {
        root = sqrt_upper(w * w - 4.0 * s.dt);
    }
    j.f = s.u + root;
    if (root == Complex(0.0, 0.0)) throw DomainError("inverse slit at branch point");
    j.f1 = w / root;
    const Complex r3 = root * root * root;
    j.f2 = -4.0 * s.dt / r3;
    j.f3 = 12.0 * s.dt * w / (r3 * root * root);
    return j;
}

Jet3 sqrt_jet(const SqrtOpening& s, const Complex& z) {
    if (z == Complex(0.0, 0.0)) throw BranchError("sqrt at branch point 0");
    const Complex r =
        s.branch == SqrtOpening::Branch::principal ? sqrt_principal(z) : sqrt_upper(z);
    Jet3 j;
    j.f = r;
    j.f1 = 0.5 / r;
    j.f2 = -0.25 / (r * r * r);
    j.f3 = 0.375 / (r * r * r * r * r);
    return j;
}

Jet3 polynomial_jet(const Polynomial& p, const Complex& z) {
    Jet3 j;
    // Horner pass carrying p, p', p''/2, p'''/6 simultaneously.
    Complex f = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
        f3 = f3 * z + f2;
        f2 = f2 * z + f1;
        f1 = f1 * z + f;
        f = f * z + *it;
    }
    j.f = f;
    j.f1 = f1;
    j.f2 = 2.0 * f2;
    j.f3 = 6.0 * f3;
    return j;
}

Jet3 joukowski_jet(const JoukowskiHull& s, const Complex& z) {
    const Complex w = z - s.x0;
    if (w == Complex(0.0, 0.0)) throw DomainError("Joukowski pole");
    const double r2 = s.r * s.r;
    const Complex w2 = w * w;
    Jet3 j;
    j.f = z + r2 / w;
    j.f1 = 1.0 - r2 / w2;
    j.f2 = 2.0 * r2 / (w2 * w);
    j.f3 = -6.0 * r2 / (w2 * w2);
    return j;
}

struct JetVisitor {
    const Complex& z;
    Jet3 operator()(const Mobius& m) const { return mobius_jet(m, z); }
    Jet3 operator()(const CenteredVerticalSlit& s) const { return forward_slit_jet(s, z); }
    Jet3 operator()(const InverseVerticalSlit& s) const { return inverse_slit_jet(s, z); }
    Jet3 operator()(const SqrtOpening& s) const { return sqrt_jet(s, z); }
    Jet3 operator()(const Polynomial& p) const { return polynomial_jet(p, z); }
    Jet3 operator()(const JoukowskiHull& s) const { return joukowski_jet(s, z); }
};

Complex invert_stage(const Stage& stage, const Complex& w) {
    if (const auto* m = std::get_if<Mobius>(&stage)) {
        return stage_apply(Stage(m->inverse()), w);
    }
    if (const auto* s = std::get_if<CenteredVerticalSlit>(&stage)) {
        return stage_apply(Stage(InverseVerticalSlit{s->dt, s->u}), w);
    }
    if (const auto* s = std::get_if<InverseVerticalSlit>(&stage)) {
        return stage_apply(Stage(CenteredVerticalSlit{s->dt, s->u}), w);
    }
    if (std::get_if<SqrtOpening>(&stage)) {
        return w * w;
    }
    if (const auto* s = std::get_if<JoukowskiHull>(&stage)) {
        // z + r^2/(z - x0) = w  =>  z^2 - (x0 + w) z + (x0 w + r^2) = 0;
        // take the root outside the semidisk (continuous with z ~ w at inf).
        const Complex b = s->x0 + w;
        const Complex disc = sqrt_principal(b * b - 4.0 * (s->x0 * w + s->r * s->r));
        const Complex z1 = 0.5 * (b + disc);
        const Complex z2 = 0.5 * (b - disc);
        return std::abs(z1 - s->x0) >= std::abs(z2 - s->x0) ? z1 : z2;
    }
    throw DomainError("stage has no closed-form inverse");
}

} // namespace

Jet3 stage_jet(const Stage& stage, const Complex& z) {
    return std::visit(JetVisitor{z}, stage);
}

Complex stage_apply(const Stage& stage, const Complex& z) {
    return stage_jet(stage, z).f;
}

Complex stage_invert(const Stage& stage, const Complex& w) { return invert_stage(stage, w); }

bool stage_has_inverse(const Stage& stage) {
    return !std::holds_alternative<Polynomial>(stage);
}

Complex ConformalMap::apply(const Complex& z) const {
    Complex w = z;
    for (const auto& s : stages_) {
        w = stage_apply(s, w);
        if (!is_finite(w)) throw NonFiniteError("map evaluation blew up");
    }
    return w;
}

ComplexPoint ConformalMap::apply_point(const ComplexPoint& p) const {
    if (p.at_infinity) {
        // Walk stages in the 1/z chart only as far as Mobius images of
        // infinity; hydrodynamic stages fix it.
        ComplexPoint cur = p;
        for (const auto& s : stages_) {
            if (cur.at_infinity) {
                if (const auto* m = std::get_if<Mobius>(&s)) {
                    if (m->c == Complex(0.0, 0.0)) continue;           // fixes inf
                    cur = ComplexPoint(m->a / m->c);                    // lands finite
                    continue;
                }
                continue; // slit/Joukowski/polynomial/sqrt all fix infinity
            }
            if (const auto* m = std::get_if<Mobius>(&s)) {
                if (m->c != Complex(0.0, 0.0) && cur.value == -m->d / m->c) {
                    cur = ComplexPoint::infinity();
                    continue;
                }
            }
            cur = ComplexPoint(stage_apply(s, cur.value));
        }
        return cur;
    }
    ComplexPoint cur = p;
    for (const auto& s : stages_) {
        if (cur.at_infinity) {
            if (const auto* m = std::get_if<Mobius>(&s)) {
                if (m->c != Complex(0.0, 0.0)) {
                    cur = ComplexPoint(m->a / m->c);
                    continue;
                }
            }
            continue;
        }
        if (const auto* m = std::get_if<Mobius>(&s)) {
            if (m->c != Complex(0.0, 0.0) && cur.value == -m->d / m->c) {
                cur = ComplexPoint::infinity();
                continue;
            }
        }
        cur = ComplexPoint(stage_apply(s, cur.value));
    }
    return cur;
}

Jet3 ConformalMap::jet(const Complex& z) const {
    Jet3 acc;
    acc.f = z;
    acc.f1 = 1.0;
    for (const auto& s : stages_) {
        Jet3 outer = stage_jet(s, acc.f);
        acc = jet_compose(outer, acc);
        if (!is_finite(acc.f)) throw NonFiniteError("jet evaluation blew up");
    }
    return acc;
}

std::vector<Complex> ConformalMap::derivatives(const Complex& z, int order) const {
    if (order < 1 || order > 3) throw DomainError("derivative order must be 1..3");
    Jet3 j = jet(z);
    if (j.f1 == Complex(0.0, 0.0))
        throw DegenerateError("vanishing first derivative");
    std::vector<Complex> out{j.f1};
    if (order >= 2) out.push_back(j.f2);
    if (order >= 3) out.push_back(j.f3);
    return out;
}

Complex ConformalMap::schwarzian(const Complex& z) const {
    // Cocycle accumulation: S(s_k ∘ ... ∘ s_1) built left to right.
    Complex s_acc = 0.0;   // Schwarzian of the composition so far, at z
    Complex w = z;         // image so far
    Complex d_acc = 1.0;   // derivative of the composition so far, at z
    for (const auto& s : stages_) {
        Jet3 j = stage_jet(s, w);
        Complex s_stage;
        if (std::holds_alternative<Mobius>(s)) {
            s_stage = 0.0; // exactly: Schwarzian annihilates Mobius maps
        } else {
            s_stage = jet_schwarzian(j);
        }
        s_acc = s_acc + s_stage * d_acc * d_acc;
        d_acc = d_acc * j.f1;
        w = j.f;
    }
    return s_acc;
}

Complex ConformalMap::invert_point(const Complex& w) const {
    Complex z = w;
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
        z = invert_stage(*it, z);
        if (!is_finite(z)) throw NonFiniteError("inverse evaluation blew up");
    }
    return z;
}

std::optional<Complex> ConformalMap::derivative_at_infinity() const {
    Complex d = 1.0;
    for (const auto& s : stages_) {
        if (std::holds_alternative<CenteredVerticalSlit>(s) ||
            std::holds_alternative<InverseVerticalSlit>(s) ||
            std::holds_alternative<JoukowskiHull>(s)) {
            continue; // hydrodynamic: f(z)/z -> 1
        }
        if (const auto* m = std::get_if<Mobius>(&s)) {
            if (m->c == Complex(0.0, 0.0)) {
                d *= m->a / m->d;
                continue;
            }
            return std::nullopt; // moves infinity
        }
        if (const auto* p = std::get_if<Polynomial>(&s)) {
            if (p->coeffs.size() == 2) {
                d *= p->coeffs[1];
                continue;
            }
            return std::nullopt;
        }
        return std::nullopt; // sqrt: not conformal at infinity
    }
    return d;
}

} // namespace loewner
