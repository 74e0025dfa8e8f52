#pragma once

#include <cmath>
#include <concepts>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "hypick/compensated.hpp"
#include "hypick/errors.hpp"
#include "hypick/tolerances.hpp"
#include "hypick/unit_point.hpp"

namespace hypick {

template <class M>
concept AnalyticMapLike = requires(const M m, complex z) {
    { m.value(z) } -> std::convertible_to<complex>;
    { m.derivative(z) } -> std::convertible_to<complex>;
    { m.describe() } -> std::convertible_to<std::string>;
};

// Detected separately: families with a closed form for 1 - |f(z)|^2
// provide it so hyperbolic derivatives stay accurate near the boundary.
template <class M>
concept HasDeficiency = requires(const M m, complex z) {
    { m.one_minus_abs_value_sq(z) } -> std::convertible_to<double>;
};

// Type-erased analytic self-map of the disc: a value and a derivative at
// interior points.  Copies share the underlying implementation.
class SelfMap {
public:
    template <AnalyticMapLike M>
        requires(!std::same_as<std::remove_cvref_t<M>, SelfMap>)
    SelfMap(M m) : impl_(std::make_shared<Model<std::remove_cvref_t<M>>>(std::move(m))) {}

    complex value(complex z) const { return impl_->value(z); }
    complex derivative(complex z) const { return impl_->derivative(z); }

    // 1 - |f(z)|^2, exact form when the family has one.
    double one_minus_abs_value_sq(complex z) const {
        return impl_->one_minus_abs_value_sq(z);
    }

    std::string describe() const { return impl_->describe(); }

private:
    struct Concept {
        virtual ~Concept() = default;
        virtual complex value(complex) const = 0;
        virtual complex derivative(complex) const = 0;
        virtual double one_minus_abs_value_sq(complex) const = 0;
        virtual std::string describe() const = 0;
    };

    template <class M>
    struct Model final : Concept {
        explicit Model(M m) : map(std::move(m)) {}
        complex value(complex z) const override { return map.value(z); }
        complex derivative(complex z) const override { return map.derivative(z); }
        double one_minus_abs_value_sq(complex z) const override {
            if constexpr (HasDeficiency<M>)
                return map.one_minus_abs_value_sq(z);
            else
                return detail::one_minus_abs_sq(map.value(z));
        }
        std::string describe() const override { return map.describe(); }
        M map;
    };

    std::shared_ptr<const Concept> impl_;
};

namespace detail {
inline std::string fmt_complex(complex z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}
} // namespace detail

// f(z) = c with |c| <= 1 (unimodular constants are legal, e.g. as seeds).
class ConstantMap {
public:
    explicit ConstantMap(complex c) : c_(c) {
        if (std::abs(c_) > 1.0 + 1e-15)
            throw DomainError("constant map value lies outside the closed disc");
    }
    complex value(complex) const { return c_; }
    complex derivative(complex) const { return complex(0.0, 0.0); }
    double one_minus_abs_value_sq(complex) const { return detail::one_minus_abs_sq(c_); }
    std::string describe() const { return "constant(" + detail::fmt_complex(c_) + ")"; }

private:
    complex c_;
};

// f(z) = lambda z with |lambda| <= 1.
class ScalarMap {
public:
    explicit ScalarMap(complex lambda) : lambda_(lambda) {
        if (std::abs(lambda_) > 1.0 + 1e-15)
            throw DomainError("scalar map factor lies outside the closed disc");
    }
    complex value(complex z) const { return lambda_ * z; }
    complex derivative(complex) const { return lambda_; }
    double one_minus_abs_value_sq(complex z) const {
        return detail::one_minus_scaled_abs_sq(std::abs(lambda_), z);
    }
    std::string describe() const { return "scaled(" + detail::fmt_complex(lambda_) + ")"; }

private:
    complex lambda_;
};

inline SelfMap identity_map() { return SelfMap(ScalarMap(complex(1.0, 0.0))); }

// outer(inner(z)); the deficiency of the composite is the outer one.
class ComposedMap {
public:
    ComposedMap(SelfMap outer, SelfMap inner)
        : outer_(std::move(outer)), inner_(std::move(inner)) {}
    complex value(complex z) const { return outer_.value(inner_.value(z)); }
    complex derivative(complex z) const {
        return outer_.derivative(inner_.value(z)) * inner_.derivative(z);
    }
    double one_minus_abs_value_sq(complex z) const {
        return outer_.one_minus_abs_value_sq(inner_.value(z));
    }
    std::string describe() const {
        return outer_.describe() + " o " + inner_.describe();
    }

private:
    SelfMap outer_, inner_;
};

inline SelfMap composed(SelfMap outer, SelfMap inner) {
    return SelfMap(ComposedMap(std::move(outer), std::move(inner)));
}

// f^h(z) = (1-|z|^2) f'(z) / (1-|f(z)|^2).  Schwarz-Pick bounds its
// modulus by 1, with equality everywhere exactly for automorphisms.
inline complex hyperbolic_derivative(const SelfMap& f, complex z) {
    const double num_scale = detail::one_minus_abs_sq(z);
    const double denom = f.one_minus_abs_value_sq(z);
    const double abs_val = std::sqrt(std::max(0.0, 1.0 - denom));
    if (abs_val >= 1.0 - unimodular_tol)
        throw DomainError("hyperbolic derivative undefined: |f(z)| = " +
                          std::to_string(abs_val));
    return num_scale * f.derivative(z) / denom;
}

inline complex hyperbolic_derivative(const SelfMap& f, const UnitPoint& z) {
    return hyperbolic_derivative(f, z.value());
}

} // namespace hypick
