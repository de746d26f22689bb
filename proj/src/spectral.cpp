#include "sobconst/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "sobconst/constants.hpp"

namespace sobconst {

void TorusGrid::validate() const {
    if (dim < 1 || dim > 3) throw DomainError("torus grid: dim must be 1, 2 or 3");
    if (n < 2 || n > 256 || (n & (n - 1)) != 0) throw DomainError("torus grid: n must be a power of two <= 256");
    if (!(box_length > 0.0) || !std::isfinite(box_length)) throw DomainError("torus grid: box_length must be > 0");
    if (total_points() > (Eigen::Index{1} << 22)) throw DomainError("torus grid: more than 2^22 points");
}

Eigen::Index TorusGrid::total_points() const {
    Eigen::Index total = 1;
    for (int a = 0; a < dim; ++a) total *= n;
    return total;
}

double TorusGrid::cell_volume() const { return std::pow(spacing(), dim); }

std::string to_string(TrialFamily::Kind kind) {
    switch (kind) {
        case TrialFamily::Kind::gaussian: return "gaussian";
        case TrialFamily::Kind::bump: return "bump";
        case TrialFamily::Kind::plane_wave_modulated: return "plane_wave_modulated";
    }
    return "unknown";
}

TrialFamily::Kind parse_trial_kind(const std::string& name) {
    if (name == "gaussian") return TrialFamily::Kind::gaussian;
    if (name == "bump") return TrialFamily::Kind::bump;
    if (name == "plane_wave_modulated") return TrialFamily::Kind::plane_wave_modulated;
    throw ConfigError("unknown trial family '" + name + "'");
}

namespace {

double coordinate(const TorusGrid& grid, Eigen::Index j) { return (static_cast<double>(j) - grid.n / 2) * grid.spacing(); }

template <typename Fn>
SpectralField sample(const TorusGrid& grid, Fn&& fn) {
    grid.validate();
    SpectralField f{grid, Eigen::ArrayXcd(grid.total_points())};
    double x[3] = {0.0, 0.0, 0.0};
    for (Eigen::Index idx = 0; idx < f.values.size(); ++idx) {
        Eigen::Index rest = idx;
        for (int a = grid.dim - 1; a >= 0; --a) {
            x[a] = coordinate(grid, rest % grid.n);
            rest /= grid.n;
        }
        f.values[idx] = fn(x);
    }
    return f;
}

void transform_axes(const TorusGrid& grid, Eigen::ArrayXcd& data, bool inverse) {
    Eigen::FFT<double> fft;
    const Eigen::Index n = grid.n;
    std::vector<std::complex<double>> line(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
    Eigen::Index stride = 1;
    for (int axis = grid.dim - 1; axis >= 0; --axis) {
        const Eigen::Index block = n * stride;
        for (Eigen::Index outer = 0; outer < data.size(); outer += block) {
            for (Eigen::Index inner = 0; inner < stride; ++inner) {
                for (Eigen::Index j = 0; j < n; ++j) line[j] = data[outer + j * stride + inner];
                if (inverse) {
                    fft.inv(out, line);
                } else {
                    fft.fwd(out, line);
                }
                for (Eigen::Index j = 0; j < n; ++j) data[outer + j * stride + inner] = out[j];
            }
        }
        stride = block;
    }
}

}  // namespace

SpectralField trial_member(TrialFamily::Kind kind, double width, const TorusGrid& grid) {
    if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("trial width must be > 0");
    const int dim = grid.dim;
    const auto r2 = [dim](const double* x) {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) s += x[a] * x[a];
        return s;
    };
    switch (kind) {
        case TrialFamily::Kind::gaussian:
            return sample(grid, [&](const double* x) { return std::exp(-r2(x) / (2.0 * width * width)); });
        case TrialFamily::Kind::bump:
            return sample(grid, [&](const double* x) {
                const double u = r2(x) / (width * width);
                return u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u)) : 0.0;
            });
        case TrialFamily::Kind::plane_wave_modulated:
            return sample(grid, [&](const double* x) {
                return std::exp(-r2(x) / (2.0 * width * width)) * std::cos(std::numbers::pi * x[0] / width);
            });
    }
    throw DomainError("unknown trial family");
}

SpectralField constant_field(const TorusGrid& grid, double value) {
    grid.validate();
    return {grid, Eigen::ArrayXcd::Constant(grid.total_points(), value)};
}

Eigen::ArrayXcd forward_transform(const SpectralField& f) {
    Eigen::ArrayXcd data = f.values;
    transform_axes(f.grid, data, false);
    return data;
}

SpectralField inverse_transform(const TorusGrid& grid, const Eigen::ArrayXcd& coefficients) {
    SpectralField f{grid, coefficients};
    transform_axes(grid, f.values, true);
    return f;
}

double parseval_defect(const SpectralField& f) {
    const double physical = f.values.abs2().sum();
    const double spectral = forward_transform(f).abs2().sum() / static_cast<double>(f.values.size());
    if (physical == 0.0) return spectral;
    return std::abs(physical - spectral) / physical;
}

Eigen::ArrayXd frequency_norm2(const TorusGrid& grid) {
    grid.validate();
    Eigen::ArrayXd axis(grid.n);
    const double scale = 2.0 * std::numbers::pi / grid.box_length;
    for (int j = 0; j < grid.n; ++j) {
        const double k = j < grid.n / 2 ? j : j - grid.n;
        axis[j] = (scale * k) * (scale * k);
    }
    Eigen::ArrayXd out(grid.total_points());
    for (Eigen::Index idx = 0; idx < out.size(); ++idx) {
        Eigen::Index rest = idx;
        double s = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            s += axis[rest % grid.n];
            rest /= grid.n;
        }
        out[idx] = s;
    }
    return out;
}

namespace {

SpectralField apply_multiplier(const TorusGrid& grid, const Eigen::ArrayXcd& coefficients,
                               const Eigen::ArrayXd& xi2, double tau, double alpha) {
    const Eigen::ArrayXd mult = (0.5 * alpha * (tau + xi2).log()).exp();
    return inverse_transform(grid, coefficients * mult.cast<std::complex<double>>());
}

void require_tau(double tau) {
    if (!(tau >= 1.0) || !std::isfinite(tau)) throw DomainError("tau must be >= 1");
}

}  // namespace

SpectralField bessel_apply(const SpectralField& f, double tau, double alpha) {
    require_tau(tau);
    if (alpha == 0.0) return f;
    return apply_multiplier(f.grid, forward_transform(f), frequency_norm2(f.grid), tau, alpha);
}

double lp_norm(const SpectralField& f, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm requires 1 <= p < inf");
    const Eigen::ArrayXd mag = f.values.abs();
    const double top = mag.maxCoeff();
    if (top == 0.0) return 0.0;
    const double sum = (mag / top).pow(p).sum() * f.grid.cell_volume();
    return top * std::pow(sum, 1.0 / p);
}

namespace {

void require_dim(const SpectralField& f, const ExponentPair& pair) {
    if (pair.d() != f.grid.dim) {
        throw DomainError("exponent pair dimension " + std::to_string(pair.d()) + " does not match grid dim " +
                          std::to_string(f.grid.dim));
    }
}

double ratio_from(double numerator, double denominator) {
    if (!(denominator > 0.0)) throw DomainError("embedding ratio: zero denominator");
    return numerator / denominator;
}

}  // namespace

double embedding_ratio(const SpectralField& f, const ExponentPair& pair, double tau) {
    require_dim(f, pair);
    return ratio_from(lp_norm(f, pair.q()), lp_norm(bessel_apply(f, tau, pair.alpha()), pair.p()));
}

EmbeddingSweep embedding_sweep(const TrialFamily& family, const std::vector<ExponentPair>& pairs, double tau,
                               const TorusGrid& grid) {
    require_tau(tau);
    if (family.widths.empty() || pairs.empty()) throw DomainError("embedding_sweep needs widths and pairs");
    const Eigen::ArrayXd xi2 = frequency_norm2(grid);
    EmbeddingSweep sweep;
    for (double w : family.widths) {
        const SpectralField f = trial_member(family.kind, w, grid);
        const Eigen::ArrayXcd coefficients = forward_transform(f);
        for (const ExponentPair& pair : pairs) {
            require_dim(f, pair);
            const SpectralField g =
                pair.alpha() == 0.0 ? f : apply_multiplier(grid, coefficients, xi2, tau, pair.alpha());
            const double ratio = ratio_from(lp_norm(f, pair.q()), lp_norm(g, pair.p()));
            const double s = S(pair);
            sweep.rows.push_back({family.kind, w, pair, ratio, ratio / s});
            sweep.fitted_A = std::max(sweep.fitted_A, ratio / s);
        }
    }
    return sweep;
}

int mt_tail_start(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("Moser-Trudinger exponent must satisfy 1 < p < inf");
    return static_cast<int>(std::ceil(p - 1.0));
}

namespace {

// exp(x) - sum_{k<K} x^k/k! for x >= 0
double exp_tail(double x, int K) {
    if (x == 0.0) return K == 0 ? 1.0 : 0.0;
    if (x > 709.0) throw NumericalError("mt_functional overflow: reduce gamma");
    if (x > K + 1.0) {
        double partial = 0.0;
        double term = 1.0;
        for (int k = 0; k < K; ++k) {
            partial += term;
            term *= x / (k + 1);
        }
        return std::max(std::exp(x) - partial, 0.0);
    }
    double term = std::exp(K * std::log(x) - std::lgamma(K + 1.0));
    double sum = 0.0;
    for (int k = K; k < K + 400; ++k) {
        sum += term;
        if (term < 1e-17 * sum) break;
        term *= x / (k + 1);
    }
    return sum;
}

}  // namespace

double mt_functional(const SpectralField& f, double gamma, double p) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("mt_functional requires gamma >= 0");
    const int K = mt_tail_start(p);
    const double pc = conjugate_exponent(p);
    double sum = 0.0;
    double c = 0.0;
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        const double v = exp_tail(gamma * std::pow(std::abs(f.values[i]), pc), K) - c;
        const double t = sum + v;
        c = (t - sum) - v;
        sum = t;
    }
    return sum * f.grid.cell_volume();
}

InterpolationCheck interpolation_check(const SpectralField& f, double p, double alpha, double theta, double tau) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("interpolation_check requires theta in [0, 1]");
    require_tau(tau);
    const double mid = lp_norm(theta == 1.0 ? bessel_apply(f, tau, alpha) : bessel_apply(f, tau, theta * alpha), p);
    const double low = lp_norm(f, p);
    const double high = lp_norm(bessel_apply(f, tau, alpha), p);
    const double rhs = std::pow(low, 1.0 - theta) * std::pow(high, theta);
    return {mid, rhs, ratio_from(mid, rhs)};
}

GagliardoCheck gagliardo_interp_check(const SpectralField& f, const ExponentPair& pair, double tau) {
    require_dim(f, pair);
    const double p = pair.p();
    const double q = pair.q();
    if (!(q > p)) throw DomainError("gagliardo_interp_check requires q > p");
    const double top = lp_norm(bessel_apply(f, tau, static_cast<double>(pair.d()) / p), p);
    const double base = lp_norm(f, p);
    return {lp_norm(f, q), S(p, q) * std::pow(top, 1.0 - p / q) * std::pow(base, p / q)};
}

}  // namespace sobconst
