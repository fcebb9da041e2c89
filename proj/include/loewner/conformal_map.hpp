#ifndef LOEWNER_CONFORMAL_MAP_HPP
#define LOEWNER_CONFORMAL_MAP_HPP

#include <optional>
#include <variant>
#include <vector>

#include "loewner/complex_util.hpp"

namespace loewner {

// Value and first three derivatives of an analytic map at a point.
struct Jet3 {
    Complex f{};
    Complex f1{};
    Complex f2{};
    Complex f3{};
};

// Jet of f∘g from the jets of f (at g(z)) and g (at z), Faa di Bruno to order 3.
Jet3 jet_compose(const Jet3& outer, const Jet3& inner);

// Schwarzian S f = f'''/f' - (3/2)(f''/f')^2 read off a jet.
Complex jet_schwarzian(const Jet3& jet);

// ---------------------------------------------------------------------------
// Elementary map stages. The catalogue is closed: every conformal map handled
// by the toolkit is a finite composition of these six kinds, so derivatives
// and Schwarzians are available in closed form everywhere.
// ---------------------------------------------------------------------------

struct Mobius {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0}; // z -> (az+b)/(cz+d), ad-bc != 0

    static Mobius identity() { return {}; }
    static Mobius translation(const Complex& t) { return {1.0, t, 0.0, 1.0}; }
    static Mobius scaling(const Complex& s) { return {s, 0.0, 0.0, 1.0}; }
    // z -> (p - z)/(z - q): sends p to 0 and q to infinity.
    static Mobius zero_pole(const Complex& p, const Complex& q) {
        return {{-1.0, 0.0}, p, {1.0, 0.0}, -q};
    }
    Mobius inverse() const { return {d, -b, -c, a}; }
};

// Closes the vertical slit [u, u + 2i*sqrt(dt)]: maps H \ slit onto H,
// hydrodynamically normalized with half-plane capacity dt.
struct CenteredVerticalSlit {
    double dt = 0.0;
    double u = 0.0;
};

// Opens the vertical slit: maps H onto H \ [u, u + 2i*sqrt(dt)]. Inverse of
// the stage above.
struct InverseVerticalSlit {
    double dt = 0.0;
    double u = 0.0;
};

// Square root with a declared branch.
struct SqrtOpening {
    enum class Branch {
        principal, // cut (-inf, 0]; maps H into the first quadrant
        upper      // cut [0, +inf); maps C \ [0,inf) onto H
    };
    Branch branch = Branch::principal;
};

// Polynomial z -> sum coeffs[k] z^k, used for disk maps like z + c z^2.
struct Polynomial {
    std::vector<Complex> coeffs; // coeffs[0] + coeffs[1] z + ...
};

// Uniformizer of H minus the semidisk |z - x0| <= r: z -> z + r^2/(z - x0).
// Fixes infinity with derivative 1.
struct JoukowskiHull {
    double x0 = 0.0;
    double r = 1.0;
};

using Stage = std::variant<Mobius, CenteredVerticalSlit, InverseVerticalSlit,
                           SqrtOpening, Polynomial, JoukowskiHull>;

Jet3 stage_jet(const Stage& stage, const Complex& z);
Complex stage_apply(const Stage& stage, const Complex& z);
Complex stage_invert(const Stage& stage, const Complex& w);
bool stage_has_inverse(const Stage& stage);

// ---------------------------------------------------------------------------
// A finite composition of elementary stages, applied first-to-last.
// Immutable value semantics; composition state is never shared mutably.
// ---------------------------------------------------------------------------
class ConformalMap {
  public:
    ConformalMap() = default;
    explicit ConformalMap(std::vector<Stage> stages) : stages_(std::move(stages)) {}
    static ConformalMap identity() { return ConformalMap(); }
    static ConformalMap single(Stage s) { return ConformalMap({std::move(s)}); }

    const std::vector<Stage>& stages() const { return stages_; }
    bool empty() const { return stages_.empty(); }
    std::size_t size() const { return stages_.size(); }

    void append(Stage s) { stages_.push_back(std::move(s)); }
    void append(const ConformalMap& m) {
        stages_.insert(stages_.end(), m.stages_.begin(), m.stages_.end());
    }
    // this followed by m (m is applied after *this).
    ConformalMap then(const ConformalMap& m) const {
        ConformalMap r(*this);
        r.append(m);
        return r;
    }

    Complex apply(const Complex& z) const;
    ComplexPoint apply_point(const ComplexPoint& p) const;

    // First `order` derivatives (order in 1..3) at an interior point or at a
    // real boundary point where the composition extends by Schwarz reflection.
    // No finite differencing: exact per-stage jets chained by Faa di Bruno.
    std::vector<Complex> derivatives(const Complex& z, int order) const;

    Jet3 jet(const Complex& z) const;

    // Schwarzian of the composition via the cocycle rule
    // S(f∘g) = (S f ∘ g) g'^2 + S g, one stage at a time.
    Complex schwarzian(const Complex& z) const;

    // Exact preimage, available when every stage carries a closed-form
    // inverse (all kinds except SqrtOpening accept this; SqrtOpening inverts
    // by squaring).
    Complex invert_point(const Complex& w) const;

    // Chart derivative at infinity, lim f(z)/z, available when the
    // composition fixes infinity through affine/hydrodynamic stages only.
    std::optional<Complex> derivative_at_infinity() const;

  private:
    std::vector<Stage> stages_;
};

} // namespace loewner

#endif
