#include "semiwave/convolution.hpp"

#include "semiwave/errors.hpp"
#include "semiwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace semiwave::numerics {

namespace {

double hat(double u, double h)
{
    double a = std::abs(u) / h;
    return a >= 1.0 ? 0.0 : 1.0 - a;
}

// int_{x0}^{x0+h} density(r) * hat(m h - r) dr split at breakpoints.
double hat_piece(const std::function<double(double)>& density, double a, double b, double center,
                 double h, const std::vector<double>& cuts)
{
    double total = 0.0;
    double x = a;
    auto it = std::upper_bound(cuts.begin(), cuts.end(), a);
    auto f = [&](double r) { return density(r) * hat(center - r, h); };
    while (x < b) {
        double y = b;
        if (it != cuts.end() && *it < b) {
            y = *it;
            ++it;
        }
        if (y > x)
            total += gauss10(f, x, y);
        x = y;
    }
    return total;
}

// (a h - 1 + e^{-a h}) / (a^2 h) = int_0^h e^{-a u}(1 - u/h) du.
double half_hat_exp(double a, double h)
{
    double x = a * h;
    double num;
    if (x < 1e-3) {
        num = x * x / 2.0 - x * x * x / 6.0 + x * x * x * x / 24.0 - x * x * x * x * x / 120.0;
    } else {
        num = x + std::expm1(-x);
    }
    return num / (a * x);
}

// int_{-h}^{h} e^{a u}(1 - |u|/h) du = 4 sinh^2(a h / 2) / (a^2 h).
double full_hat_exp(double a, double h)
{
    double s = std::sinh(0.5 * a * h);
    return 4.0 * s * s / (a * a * h);
}

} // namespace

double SampledKernel::total() const
{
    return std::accumulate(w.begin(), w.end(), 0.0) + mass_below + mass_above;
}

SampledKernel sample_projection(const kernels::ProjectedKernel& k2, double h, long max_offset,
                                double nominal_mass)
{
    if (!(h > 0.0))
        throw InvalidParameter("sample_projection: step must be positive");
    SampledKernel out;
    out.h = h;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& a : k2.atoms) {
        lo = std::min(lo, a.at);
        hi = std::max(hi, a.at);
    }
    if (k2.density) {
        lo = std::min(lo, k2.support.lo);
        hi = std::max(hi, k2.support.hi);
    }
    if (!(hi >= lo))
        throw InvalidParameter("sample_projection: empty kernel");

    long m_lo = static_cast<long>(std::floor(lo / h)) - 1;
    long m_hi = static_cast<long>(std::ceil(hi / h)) + 1;
    long cap_lo = std::max(m_lo, -max_offset);
    long cap_hi = std::min(m_hi, max_offset);
    if (cap_lo > cap_hi) {
        // Kernel lives entirely outside the representable offsets.
        cap_lo = cap_hi = (m_hi < -max_offset) ? -max_offset : max_offset;
    }
    out.m_lo = cap_lo;
    out.w.assign(static_cast<std::size_t>(cap_hi - cap_lo + 1), 0.0);

    for (const auto& a : k2.atoms) {
        long m0 = static_cast<long>(std::floor(a.at / h));
        double frac = a.at / h - static_cast<double>(m0);
        for (auto [m, wgt] : {std::pair<long, double>{m0, 1.0 - frac}, {m0 + 1, frac}}) {
            if (wgt == 0.0)
                continue;
            if (m < cap_lo)
                out.mass_below += a.weight * wgt;
            else if (m > cap_hi)
                out.mass_above += a.weight * wgt;
            else
                out.w[static_cast<std::size_t>(m - cap_lo)] += a.weight * wgt;
        }
    }

    if (k2.density) {
        std::vector<double> cuts = k2.breakpoints;
        for (long m = cap_lo; m <= cap_hi; ++m) {
            double c = static_cast<double>(m) * h;
            double a = std::max(c - h, k2.support.lo);
            double b = std::min(c + h, k2.support.hi);
            if (!(b > a))
                continue;
            double v = 0.0;
            if (a < c)
                v += hat_piece(k2.density, a, std::min(c, b), c, h, cuts);
            if (b > c)
                v += hat_piece(k2.density, std::max(a, c), b, c, h, cuts);
            out.w[static_cast<std::size_t>(m - cap_lo)] += v;
        }
        // Mass of the hats that were not stored.
        double edge_lo = static_cast<double>(cap_lo) * h;
        double edge_hi = static_cast<double>(cap_hi) * h;
        cuts.push_back(edge_lo - h);
        cuts.push_back(edge_hi + h);
        std::sort(cuts.begin(), cuts.end());
        if (k2.support.lo < edge_lo) {
            auto below = [&](double r) {
                double keep = r > edge_lo - h ? hat(edge_lo - r, h) : 0.0;
                return k2.density(r) * (1.0 - keep);
            };
            out.mass_below += integrate_pieces(below, k2.support.lo, edge_lo, cuts, 1e-12, 1e-10).value;
        }
        if (k2.support.hi > edge_hi) {
            auto above = [&](double r) {
                double keep = r < edge_hi + h ? hat(r - edge_hi, h) : 0.0;
                return k2.density(r) * (1.0 - keep);
            };
            out.mass_above += integrate_pieces(above, edge_hi, k2.support.hi, cuts, 1e-12, 1e-10).value;
        }
    }

    double raw = out.total();
    out.defect = raw - nominal_mass;
    if (raw > 0.0) {
        double scale = nominal_mass / raw;
        for (double& x : out.w)
            x *= scale;
        out.mass_below *= scale;
        out.mass_above *= scale;
    }
    return out;
}

SampledKernel sample_green(const kernels::ExponentialGreen& k1, double h, long max_offset)
{
    SampledKernel out;
    out.h = h;
    out.m_lo = -max_offset;
    out.w.assign(static_cast<std::size_t>(2 * max_offset + 1), 0.0);
    double a_plus = full_hat_exp(k1.nu(), h) / k1.norm();
    double a_minus = full_hat_exp(k1.mu(), h) / k1.norm();
    for (long m = -max_offset; m <= max_offset; ++m) {
        double v;
        if (m > 0)
            v = a_plus * std::exp(k1.nu() * h * static_cast<double>(m));
        else if (m < 0)
            v = a_minus * std::exp(k1.mu() * h * static_cast<double>(m));
        else
            v = (half_hat_exp(-k1.nu(), h) + half_hat_exp(k1.mu(), h)) / k1.norm();
        out.w[static_cast<std::size_t>(m + max_offset)] = v;
    }
    // Geometric tails beyond the stored offsets.
    double n = static_cast<double>(max_offset + 1);
    out.mass_above = a_plus * std::exp(k1.nu() * h * n) / (-std::expm1(k1.nu() * h));
    out.mass_below = a_minus * std::exp(-k1.mu() * h * n) / (-std::expm1(-k1.mu() * h));
    return out;
}

void convolve(const SampledKernel& k, std::span<const double> v, ExtensionPolicy policy,
              std::span<double> out)
{
    const long n = static_cast<long>(v.size());
    if (static_cast<long>(out.size()) != n)
        throw InvalidParameter("convolve: output size mismatch");
    if (n == 0)
        return;
    const long m_lo = k.m_lo;
    const long m_hi = k.m_hi();
    const double left = policy.left == Extension::Hold ? v[0] : 0.0;
    const double right = policy.right == Extension::Hold ? v[static_cast<std::size_t>(n - 1)] : 0.0;

    // Padded input: index p corresponds to grid index p - pad_lo.
    // out_i = sum_m w_m v_{i - m}, with i - m in [-m_hi, n - 1 - m_lo].
    const long pad_lo = std::max(0L, m_hi);
    const long pad_hi = std::max(0L, -m_lo);
    std::vector<double> padded(static_cast<std::size_t>(n + pad_lo + pad_hi));
    std::fill(padded.begin(), padded.begin() + pad_lo, left);
    std::copy(v.begin(), v.end(), padded.begin() + pad_lo);
    std::fill(padded.begin() + pad_lo + n, padded.end(), right);

    std::fill(out.begin(), out.end(), right * k.mass_below + left * k.mass_above);
    double* o = out.data();
    const double* w = k.w.data();
    const long taps = static_cast<long>(k.w.size());
    // base[i - kk] = padded value for tap kk at output i
    const double* base = padded.data() + (pad_lo - m_lo);
    constexpr long block = 256;
    for (long i0 = 0; i0 < n; i0 += block) {
        const long i1 = std::min(n, i0 + block);
        long kk = 0;
        for (; kk + 4 <= taps; kk += 4) {
            const double w0 = w[kk], w1 = w[kk + 1], w2 = w[kk + 2], w3 = w[kk + 3];
            const double* s0 = base - kk;
            for (long i = i0; i < i1; ++i)
                o[i] += w0 * s0[i] + w1 * s0[i - 1] + w2 * s0[i - 2] + w3 * s0[i - 3];
        }
        for (; kk < taps; ++kk) {
            const double wk = w[kk];
            const double* s0 = base - kk;
            for (long i = i0; i < i1; ++i)
                o[i] += wk * s0[i];
        }
    }
}

void convolve_green(const kernels::ExponentialGreen& k1, double h, std::span<const double> v,
                    ExtensionPolicy policy, std::span<double> out)
{
    const std::size_t n = v.size();
    if (out.size() != n)
        throw InvalidParameter("convolve_green: output size mismatch");
    if (n == 0)
        return;
    const double nu = k1.nu();
    const double mu = k1.mu();
    const double a_plus = full_hat_exp(nu, h) / k1.norm();
    const double a_minus = full_hat_exp(mu, h) / k1.norm();
    const double w0 = (half_hat_exp(-nu, h) + half_hat_exp(mu, h)) / k1.norm();
    const double qp = std::exp(nu * h);
    const double qm = std::exp(-mu * h);

    // Backward part: sum over j > i of a_minus qm^{j - i} v_j.
    std::vector<double> back(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;)
        back[i] = qm * (back[i + 1] + v[i + 1]);

    const double left = policy.left == Extension::Hold ? v[0] : 0.0;
    const double right = policy.right == Extension::Hold ? v[n - 1] : 0.0;
    // Ghost nodes j <= -1 seen from i: sum_{k >= i + 1} qp^k.
    double left_tail = qp / (-std::expm1(nu * h));

    double fwd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0)
            fwd = qp * (fwd + v[i - 1]);
        double val = w0 * v[i] + a_plus * fwd + a_minus * back[i];
        if (left != 0.0)
            val += a_plus * left * left_tail;
        if (right != 0.0) {
            // Ghost nodes j >= n seen from i: sum_{k >= n - i} qm^k.
            double k = static_cast<double>(n - i);
            val += a_minus * right * std::exp(-mu * h * k) / (-std::expm1(-mu * h));
        }
        out[i] = val;
        left_tail *= qp;
    }
}

} // namespace semiwave::numerics
