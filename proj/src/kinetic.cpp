#include "sgdg/kinetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sgdg/quadrature.hpp"

namespace sgdg {

namespace {

Box concat(const Box& a, const Box& b) {
  Box out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Composite Gauss integral of a smooth 1D function over an interval.
double integrate_interval(const std::function<double(double)>& f, Interval iv, int cells = 2048, int points = 8) {
  const GaussRule g = gauss_legendre(points);
  const double h = iv.width() / cells;
  double sum = 0.0;
  for (int c = 0; c < cells; ++c) {
    double cell = 0.0;
    for (int q = 0; q < g.size(); ++q) cell += g.weights[q] * f(iv.lo + h * (c + g.nodes[q]));
    sum += cell;
  }
  return sum * h;
}

int ipow(int base, int e) {
  int r = 1;
  while (e-- > 0) r *= base;
  return r;
}

// out (x-function coefficients) = int f prod v^powers dv, for raw coefficient spans.
void moment_into(const PhaseSpace& ps, const std::vector<VelocityMoments>& moments, std::span<const double> f,
                 std::span<const int> powers, std::span<double> out) {
  const SparseLayout& layout = *ps.layout();
  const SparseLayout& xl = *ps.x_layout();
  const int dx = ps.dx(), dv = ps.dv();
  const int p = ps.basis()->order();
  const int bx_size = ipow(p, dx);
  const int bv_size = ipow(p, dv);
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> weight(bv_size);
  std::vector<int> xpos(dx);
  for (int e = 0; e < layout.num_elements(); ++e) {
    bool any = false;
    for (int bv = 0; bv < bv_size; ++bv) {
      double w = 1.0;
      int rem = bv;
      for (int m = dv - 1; m >= 0; --m) {
        const int poly = rem % p;
        rem /= p;
        w *= moments[m](powers[m], layout.position(e, dx + m), poly);
      }
      weight[bv] = w;
      any = any || w != 0.0;
    }
    if (!any) continue;
    for (int m = 0; m < dx; ++m) xpos[m] = layout.position(e, m);
    const int xe = xl.element_index(xpos);
    const double* src = f.data() + static_cast<std::size_t>(e) * bx_size * bv_size;
    double* dst = out.data() + static_cast<std::size_t>(xe) * bx_size;
    for (int bx = 0; bx < bx_size; ++bx) {
      double s = 0.0;
      for (int bv = 0; bv < bv_size; ++bv) s += src[bx * bv_size + bv] * weight[bv];
      dst[bx] += s;
    }
  }
}

std::vector<VelocityMoments> make_moments(const PhaseSpace& ps) {
  std::vector<VelocityMoments> out;
  for (int m = 0; m < ps.dv(); ++m) out.emplace_back(*ps.basis(), ps.max_level(), ps.v_box()[m]);
  return out;
}

Factor1d linear_factor(double slope) {
  return Factor1d::analytic([slope](double x) { return slope * x; });
}

}  // namespace

PhaseSpace::PhaseSpace(int dx, int dv, int max_level, int degree, Box x_box, Box v_box)
    : dx_(dx), dv_(dv), max_level_(max_level), x_box_(std::move(x_box)), v_box_(std::move(v_box)) {
  if (dx != dv || dx < 1 || dx > 2) throw std::invalid_argument("PhaseSpace: need dx = dv in {1, 2}");
  if (static_cast<int>(x_box_.size()) != dx || static_cast<int>(v_box_.size()) != dv) {
    throw std::invalid_argument("PhaseSpace: box dimension mismatch");
  }
  for (const auto& iv : concat(x_box_, v_box_)) {
    if (!(iv.width() > 0.0)) throw std::invalid_argument("PhaseSpace: intervals must have positive width");
  }
  box_ = concat(x_box_, v_box_);
  layout_ = SparseLayout::make(max_level, dx + dv);
  x_layout_ = SparseLayout::make(max_level, dx);
  basis_ = std::make_shared<const Basis1d>(degree);
}

VelocityMoments::VelocityMoments(const Basis1d& basis, int max_level, Interval v, int max_power)
    : order_(basis.order()), positions_(1 << max_level) {
  table_.assign(static_cast<std::size_t>(max_power + 1) * positions_ * order_, 0.0);
  const GaussRule g = gauss_legendre(basis.degree() / 2 + max_power / 2 + 2);
  for (int pos = 0; pos < positions_; ++pos) {
    const int l = level_of_position(pos);
    const int j = translation_of_position(pos);
    // Support of the function, split into the pieces on which it is a polynomial.
    const double lo = l == 0 ? 0.0 : std::ldexp(j, -(l - 1));
    const double width = l == 0 ? 1.0 : std::ldexp(1.0, -(l - 1));
    const int pieces = l == 0 ? 1 : 2;
    for (int i = 0; i < order_; ++i) {
      for (int r = 0; r <= max_power; ++r) {
        // Wavelets are orthogonal to polynomials of degree <= k.
        if (l > 0 && r <= basis.degree()) continue;
        double s = 0.0;
        for (int piece = 0; piece < pieces; ++piece) {
          const double a = lo + width * piece / pieces;
          const double h = width / pieces;
          for (int q = 0; q < g.size(); ++q) {
            const double xh = a + h * g.nodes[q];
            const double vv = v.lo + v.width() * xh;
            s += g.weights[q] * h * basis.eval(l, j, i, xh) * std::pow(vv, r);
          }
        }
        table_[(static_cast<std::size_t>(r) * positions_ + pos) * order_ + i] = s * v.width();
      }
    }
  }
}

SparseGridFunction velocity_moment(const PhaseSpace& ps, const SparseGridFunction& f, std::span<const int> powers) {
  if (static_cast<int>(powers.size()) != ps.dv()) throw std::invalid_argument("velocity_moment: one power per v dimension");
  for (int r : powers) {
    if (r < 0 || r > 2) throw std::invalid_argument("velocity_moment: powers must be 0, 1 or 2");
  }
  auto out = ps.x_zeros();
  moment_into(ps, make_moments(ps), f.coeffs(), powers, out.coeffs());
  return out;
}

SparseGridFunction density(const PhaseSpace& ps, const SparseGridFunction& f) {
  const std::vector<int> zero(ps.dv(), 0);
  return velocity_moment(ps, f, zero);
}

std::vector<SparseGridFunction> current_density(const PhaseSpace& ps, const SparseGridFunction& f) {
  const auto moments = make_moments(ps);
  std::vector<SparseGridFunction> out;
  for (int m = 0; m < ps.dv(); ++m) {
    std::vector<int> powers(ps.dv(), 0);
    powers[m] = 1;
    auto j = ps.x_zeros();
    moment_into(ps, moments, f.coeffs(), powers, j.coeffs());
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<double> hierarchical_1d(const SparseGridFunction& u) {
  if (u.dim() != 1) throw std::invalid_argument("hierarchical_1d: needs a 1D function");
  const int p = u.order();
  const int count = 1 << u.max_level();
  std::vector<double> out(static_cast<std::size_t>(count) * p);
  for (int pos = 0; pos < count; ++pos) {
    const int e = u.layout().element_index(std::span<const int>(&pos, 1));
    for (int i = 0; i < p; ++i) out[static_cast<std::size_t>(pos) * p + i] = u.block(e)[i];
  }
  return out;
}

namespace {

SparseGridFunction from_hierarchical_1d(std::span<const double> hier, std::shared_ptr<const SparseLayout> layout,
                                        std::shared_ptr<const Basis1d> basis, Interval iv) {
  SparseGridFunction u(std::move(layout), std::move(basis), Box{iv});
  const int p = u.order();
  const int count = 1 << u.max_level();
  for (int pos = 0; pos < count; ++pos) {
    const int e = u.layout().element_index(std::span<const int>(&pos, 1));
    for (int i = 0; i < p; ++i) u.block(e)[i] = hier[static_cast<std::size_t>(pos) * p + i];
  }
  return u;
}

// 1D layouts store elements in position order; the packed E vector relies on it.
void require_position_order(const SparseLayout& l) {
  for (int pos = 0; pos < (1 << l.max_level()); ++pos) {
    if (l.element_index(std::span<const int>(&pos, 1)) != pos) {
      throw std::logic_error("1D layout is not stored in position order");
    }
  }
}

}  // namespace

SparseGridFunction reflect_velocity(const PhaseSpace& ps, const SparseGridFunction& f) {
  const HierMatrix r = assemble_reflection(*ps.basis(), ps.max_level());
  TensorTerm term;
  term.factors.assign(ps.dim(), nullptr);
  for (int m = ps.dx(); m < ps.dim(); ++m) term.factors[m] = &r;
  TensorApplier applier(ps.layout(), ps.basis()->order());
  auto out = f.zeros_like();
  applier.apply(term, f.coeffs(), out.coeffs());
  return out;
}

namespace {

VelocityField vlasov_field() {
  VelocityField field;
  field.components.resize(2);
  field.components[0].push_back(SeparableTerm{1.0, {Factor1d::constant(1.0), linear_factor(1.0)}});
  field.components[1].push_back(SeparableTerm{1.0, {Factor1d::constant(0.0), Factor1d::constant(1.0)}});
  return field;
}

}  // namespace

VlasovAmpere::VlasovAmpere(const PhaseSpace& ps, FluxSpec flux)
    : ps_(ps),
      f_size_(ps.zeros().size()),
      e_size_(ps.x_zeros().size()),
      moments_(make_moments(ps)),
      op_((ps.dx() == 1 ? ps.layout() : throw std::invalid_argument("VlasovAmpere: only 1D1V is supported")),
          ps.basis(), ps.box(), vlasov_field(), flux, BoundarySpec{Boundary::periodic, Boundary::zero_exterior}) {
  require_position_order(*ps_.x_layout());
}

std::vector<double> VlasovAmpere::pack(const SparseGridFunction& f, const SparseGridFunction& e) const {
  if (f.size() != f_size_ || e.size() != e_size_) throw std::invalid_argument("VlasovAmpere::pack: size mismatch");
  std::vector<double> s(size());
  std::copy(f.coeffs().begin(), f.coeffs().end(), s.begin());
  std::copy(e.coeffs().begin(), e.coeffs().end(), s.begin() + f_size_);
  return s;
}

void VlasovAmpere::unpack(std::span<const double> state, SparseGridFunction& f, SparseGridFunction& e) const {
  if (state.size() != size() || f.size() != f_size_ || e.size() != e_size_) {
    throw std::invalid_argument("VlasovAmpere::unpack: size mismatch");
  }
  std::copy(state.begin(), state.begin() + f_size_, f.coeffs().begin());
  std::copy(state.begin() + f_size_, state.end(), e.coeffs().begin());
}

void VlasovAmpere::rhs(double t, std::span<const double> state, std::span<double> out) {
  const auto f = state.first(f_size_);
  const auto e = state.subspan(f_size_);
  op_.set_factor(1, 0, 0, Factor1d::from_hierarchical(e, *ps_.basis(), ps_.max_level(), ps_.x_box()[0]));
  op_.apply(t, f, out.first(f_size_));
  const int one = 1;
  auto de = out.subspan(f_size_);
  moment_into(ps_, moments_, f, std::span<const int>(&one, 1), de);
  for (double& v : de) v = -v;
}

namespace {

VelocityField relaxation_field(const PhaseSpace& ps) {
  const int dx = ps.dx();
  const int d = ps.dim();
  VelocityField field;
  field.components.resize(d);
  for (int m = 0; m < d; ++m) {
    std::vector<Factor1d> factors(d, Factor1d::constant(1.0));
    // x_m moves with v_m; v_m is pushed by E_m = -x_m.
    if (m < dx) {
      factors[dx + m] = linear_factor(1.0);
    } else {
      factors[m - dx] = linear_factor(-1.0);
    }
    field.components[m].push_back(SeparableTerm{1.0, std::move(factors)});
  }
  return field;
}

double gaussian_mass(Interval iv, double theta) {
  const double s = std::sqrt(2.0 * theta);
  return std::sqrt(std::numbers::pi * theta / 2.0) * (std::erf(iv.hi / s) - std::erf(iv.lo / s));
}

}  // namespace

RelaxationModel::RelaxationModel(const PhaseSpace& ps, RelaxationSpec spec, FluxSpec flux)
    : ps_(ps),
      spec_(spec),
      op_((spec.tau > 0.0 && spec.theta > 0.0 ? ps.layout()
                                               : throw std::invalid_argument("RelaxationModel: tau and theta must be positive")),
          ps.basis(), ps.box(), relaxation_field(ps), flux, BoundarySpec(ps.dim(), Boundary::zero_exterior)) {
  const double theta = spec_.theta;
  for (int m = 0; m < ps_.dv(); ++m) {
    mu_hier_.push_back(project_1d(
        [theta](double v) { return std::exp(-v * v / (2.0 * theta)) / std::sqrt(2.0 * std::numbers::pi * theta); },
        *ps_.basis(), ps_.max_level(), ps_.v_box()[m]));
  }
  rho_norm_ = 1.0;
  for (int m = 0; m < ps_.dx(); ++m) rho_norm_ *= gaussian_mass(ps_.x_box()[m], theta);
}

double RelaxationModel::maxwellian(std::span<const double> v) const {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::exp(-s / (2.0 * spec_.theta)) / std::pow(2.0 * std::numbers::pi * spec_.theta, 0.5 * v.size());
}

double RelaxationModel::equilibrium_density(std::span<const double> x) const {
  double s = 0.0;
  for (double y : x) s += y * y;
  return std::exp(-s / (2.0 * spec_.theta)) / rho_norm_;
}

double RelaxationModel::equilibrium(std::span<const double> xv) const {
  return equilibrium_density(xv.first(ps_.dx())) * maxwellian(xv.subspan(ps_.dx()));
}

SparseGridFunction RelaxationModel::projected_equilibrium() const {
  const double theta = spec_.theta;
  std::vector<Function1d> factors;
  for (int m = 0; m < ps_.dx(); ++m) {
    const double norm = m == 0 ? rho_norm_ : 1.0;
    factors.push_back([theta, norm](double x) { return std::exp(-x * x / (2.0 * theta)) / norm; });
  }
  for (int m = 0; m < ps_.dv(); ++m) {
    factors.push_back(
        [theta](double v) { return std::exp(-v * v / (2.0 * theta)) / std::sqrt(2.0 * std::numbers::pi * theta); });
  }
  return project_separable(factors, ps_.layout(), ps_.basis(), ps_.box());
}

void RelaxationModel::source(std::span<const double> f, std::span<double> out) const {
  const SparseLayout& layout = *ps_.layout();
  const SparseLayout& xl = *ps_.x_layout();
  const int dx = ps_.dx(), dv = ps_.dv();
  const int p = ps_.basis()->order();
  const int bx_size = ipow(p, dx);
  const int bv_size = ipow(p, dv);
  std::vector<double> rho(xl.num_elements() * static_cast<std::size_t>(bx_size));
  const std::vector<int> zero(dv, 0);
  moment_into(ps_, make_moments(ps_), f, zero, rho);
  const double inv_tau = 1.0 / spec_.tau;
  std::vector<int> xpos(dx);
  std::vector<double> mu(bv_size);
  for (int e = 0; e < layout.num_elements(); ++e) {
    for (int m = 0; m < dx; ++m) xpos[m] = layout.position(e, m);
    const int xe = xl.element_index(xpos);
    for (int bv = 0; bv < bv_size; ++bv) {
      double w = 1.0;
      int rem = bv;
      for (int m = dv - 1; m >= 0; --m) {
        const int poly = rem % p;
        rem /= p;
        w *= mu_hier_[m][static_cast<std::size_t>(layout.position(e, dx + m)) * p + poly];
      }
      mu[bv] = w;
    }
    const std::size_t base = static_cast<std::size_t>(e) * bx_size * bv_size;
    for (int bx = 0; bx < bx_size; ++bx) {
      const double r = rho[static_cast<std::size_t>(xe) * bx_size + bx];
      for (int bv = 0; bv < bv_size; ++bv) {
        const std::size_t i = base + bx * bv_size + bv;
        out[i] = (r * mu[bv] - f[i]) * inv_tau;
      }
    }
  }
}

void RelaxationModel::rhs(double t, std::span<const double> f, std::span<double> out) {
  source(f, out);
  std::vector<double> transport(out.size());
  op_.apply(t, f, transport);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += transport[i];
}

double maxwellian_1d(double v) { return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi); }

double two_stream_profile(double v) { return v * v * maxwellian_1d(v); }

namespace {

double relax_x_factor(double x, bool cosine) {
  const double s = cosine ? std::cos(0.5 * x * x) : std::sin(0.5 * x * x);
  return s * s * std::exp(-0.5 * x * x);
}

double gauss_v(double v) { return std::exp(-0.5 * v * v); }

}  // namespace

double relaxation_normalization(int dx, const Box& box) {
  if (static_cast<int>(box.size()) != 2 * dx || dx < 1 || dx > 2) {
    throw std::invalid_argument("relaxation_normalization: need a box of dimension 2 dx, dx in {1, 2}");
  }
  double s = 1.0;
  for (int m = 0; m < dx; ++m) {
    const bool cosine = m == 1;
    s *= integrate_interval([cosine](double x) { return relax_x_factor(x, cosine); }, box[m]);
  }
  for (int m = 0; m < dx; ++m) s *= integrate_interval(gauss_v, box[dx + m]);
  return s;
}

SparseGridFunction initial_condition(std::string_view name, std::shared_ptr<const SparseLayout> layout,
                                     std::shared_ptr<const Basis1d> basis, const Box& domain,
                                     const InitialParams& params) {
  const int d = layout->dim();
  if (static_cast<int>(domain.size()) != d) throw std::invalid_argument("initial_condition: domain dimension mismatch");
  if (name == "landau" || name == "two-stream") {
    if (d != 2) throw std::invalid_argument("initial_condition: " + std::string(name) + " is a 1D1V datum");
    const double a = params.amplitude, k = params.wave_number;
    const bool landau = name == "landau";
    const std::vector<Function1d> factors{[a, k](double x) { return 1.0 + a * std::cos(k * x); },
                                          landau ? Function1d(maxwellian_1d) : Function1d(two_stream_profile)};
    return project_separable(factors, layout, basis, domain);
  }
  if (name == "relax-1d" || name == "relax-2d") {
    const int dx = name == "relax-1d" ? 1 : 2;
    if (d != 2 * dx) throw std::invalid_argument("initial_condition: " + std::string(name) + " needs dimension " + std::to_string(2 * dx));
    const double s = relaxation_normalization(dx, domain);
    std::vector<Function1d> factors;
    for (int m = 0; m < dx; ++m) {
      const bool cosine = m == 1;
      const double scale = m == 0 ? 1.0 / s : 1.0;
      factors.push_back([cosine, scale](double x) { return scale * relax_x_factor(x, cosine); });
    }
    for (int m = 0; m < dx; ++m) factors.push_back(gauss_v);
    return project_separable(factors, layout, basis, domain);
  }
  if (name == "cosine-bell") {
    if (static_cast<int>(params.center.size()) != d) throw std::invalid_argument("initial_condition: cosine-bell center dimension");
    if (!(params.radius > 0.0)) throw std::invalid_argument("initial_condition: cosine-bell radius must be positive");
    const auto center = params.center;
    const double b = params.radius;
    const double scale = std::pow(b, d - 1);
    return project(
        [center, b, scale](std::span<const double> x) {
          double r2 = 0.0;
          for (std::size_t m = 0; m < x.size(); ++m) r2 += (x[m] - center[m]) * (x[m] - center[m]);
          const double r = std::sqrt(r2);
          if (r > b) return 0.0;
          return scale * std::pow(std::cos(std::numbers::pi * r / (2.0 * b)), 6);
        },
        layout, basis, domain);
  }
  if (name == "sine-sum") {
    return project(
        [](std::span<const double> x) {
          double s = 0.0;
          for (double v : x) s += v;
          return std::sin(2.0 * std::numbers::pi * s);
        },
        layout, basis, domain);
  }
  throw std::invalid_argument("initial_condition: unknown name '" + std::string(name) + "'");
}

SparseGridFunction initial_field(std::string_view name, const PhaseSpace& ps, const InitialParams& params) {
  if (ps.dx() != 1) throw std::invalid_argument("initial_field: only 1D1V is supported");
  Function1d profile;
  if (name == "landau") {
    profile = maxwellian_1d;
  } else if (name == "two-stream") {
    profile = two_stream_profile;
  } else {
    throw std::invalid_argument("initial_field: unknown name '" + std::string(name) + "'");
  }
  const double mass = integrate_interval(profile, ps.v_box()[0]);
  const double a = params.amplitude, k = params.wave_number;
  const auto hier = project_1d([=](double x) { return mass * a / k * std::sin(k * x); }, *ps.basis(), ps.max_level(),
                               ps.x_box()[0]);
  return from_hierarchical_1d(hier, ps.x_layout(), ps.basis(), ps.x_box()[0]);
}

}  // namespace sgdg
