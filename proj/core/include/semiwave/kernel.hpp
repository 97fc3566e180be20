#pragma once

#include "semiwave/law.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace semiwave::kernels {

inline constexpr double default_tail_tol = 1e-8;
inline constexpr double default_quad_tol = 1e-9;
// Quadrature transforms stay below this fraction of the abscissa.
inline constexpr double abscissa_margin = 0.99;

struct SupportBox {
    double s_max = 0.0;
    double w_min = 0.0;
    double w_max = 0.0;
};

struct TransformDomain {
    double c = 0.0;
    double z_lo = 0.0;
    double z_hi = 0.0;
};

// Description of a kernel given by a joint density K(s, w).
struct JointKernelSpec {
    std::string name;
    std::function<double(double s, double w)> log_density;
    std::function<double(double z, double c)> transform;  // optional closed form
    std::function<double(double c)> abscissa;
    SupportBox box;
    double tail_tol = default_tail_tol;
    // Centre and width of w -> K(s, w) e^{-z w} at fixed s, if known.
    std::function<std::pair<double, double>(double s, double z)> tilted_w;
};

class Kernel {
public:
    static Kernel separable(Law1D temporal, Law1D spatial);
    static Kernel joint(JointKernelSpec spec);

    bool is_separable() const;
    const Law1D& temporal() const;
    const Law1D& spatial() const;
    const JointKernelSpec& joint_spec() const;
    bool has_atoms() const;

    // K(s, w); throws InvalidParameter when the kernel has Dirac components.
    double density(double s, double w) const;
    double log_density(double s, double w) const;

    bool has_closed_transform() const;
    std::optional<double> closed_transform(double z, double c) const;
    double abscissa(double c) const;
    TransformDomain domain(double c) const;
    SupportBox support_box() const;
    double tail_tol() const;
    const std::string& name() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit Kernel(std::shared_ptr<const Impl> impl);
};

Kernel make_marine_kernel(double v_j, double d_j, double mu_j);
Kernel make_separable_kernel(Law1D temporal, Law1D spatial);

// Mass over the support box (or an explicit box).
double kernel_mass(const Kernel& k, double quad_tol = default_quad_tol,
                   std::optional<SupportBox> box = std::nullopt);

// M(z, c): closed form when available, quadrature otherwise.
double transform(const Kernel& k, double z, double c);

// M(z, c) by quadrature regardless of a closed form.
double transform_quadrature(const Kernel& k, double z, double c, double abs_tol = default_quad_tol);

// k2(r) = int_0^{s_max} K(s, r - c s) ds, including Dirac contributions as
// a density only where they produce one.
double project_k2(const Kernel& k, double c, double r);

} // namespace semiwave::kernels
