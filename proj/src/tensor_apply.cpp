#include "sgdg/tensor_apply.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgdg {

namespace {

int ipow(int base, int e) {
  int r = 1;
  while (e-- > 0) r *= base;
  return r;
}

template <int P>
void sweep_fixed(const SparseLayout& layout, int m, const HierMatrix& a, SweepPart part, const double* in,
                 double* out, double scale, bool accumulate, bool parallel) {
  const int d = layout.dim();
  const int outer = ipow(P, m);
  const int inner = ipow(P, d - 1 - m);
  const std::size_t bs = static_cast<std::size_t>(outer) * P * inner;
  const auto fibers = layout.fibers(m);
  const long n_fibers = static_cast<long>(fibers.size());

#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (long f = 0; f < n_fibers; ++f) {
    const auto ids = layout.fiber_elements(m, fibers[f]);
    const int n = static_cast<int>(ids.size());
    for (int r = 0; r < n; ++r) {
      double* o = out + ids[r] * bs;
      if (!accumulate) std::fill(o, o + bs, 0.0);
      const int begin = part == SweepPart::upper ? a.upper_begin(r) : a.row_begin(r);
      const int end = part == SweepPart::lower ? a.upper_begin(r) : a.row_end(r);
      for (int e = begin; e < end; ++e) {
        const int c = a.col(e);
        if (c >= n) break;
        const double* blk = a.block(e);
        const double* x = in + ids[c] * bs;
        for (int s = 0; s < outer; ++s) {
          for (int i = 0; i < P; ++i) {
            double* orow = o + (s * P + i) * inner;
            for (int j = 0; j < P; ++j) {
              const double coef = scale * blk[i * P + j];
              if (coef == 0.0) continue;
              const double* xrow = x + (s * P + j) * inner;
              for (int b = 0; b < inner; ++b) orow[b] += coef * xrow[b];
            }
          }
        }
      }
    }
  }
}

}  // namespace

void sweep(const SparseLayout& layout, int order, int m, const HierMatrix& a, SweepPart part,
           std::span<const double> in, std::span<double> out, double scale, bool accumulate, bool parallel) {
  if (a.order() != order || a.max_level() != layout.max_level()) {
    throw std::invalid_argument("sweep: matrix does not match the layout");
  }
  switch (order) {
    case 2: sweep_fixed<2>(layout, m, a, part, in.data(), out.data(), scale, accumulate, parallel); break;
    case 3: sweep_fixed<3>(layout, m, a, part, in.data(), out.data(), scale, accumulate, parallel); break;
    case 4: sweep_fixed<4>(layout, m, a, part, in.data(), out.data(), scale, accumulate, parallel); break;
    case 5: sweep_fixed<5>(layout, m, a, part, in.data(), out.data(), scale, accumulate, parallel); break;
    default: throw std::invalid_argument("sweep: unsupported order");
  }
}

TensorApplier::TensorApplier(std::shared_ptr<const SparseLayout> layout, int order)
    : layout_(std::move(layout)), order_(order) {
  size_ = static_cast<std::size_t>(layout_->num_elements()) * ipow(order_, layout_->dim());
  scratch_[0].resize(size_);
  scratch_[1].resize(size_);
}

void TensorApplier::apply(const TensorTerm& term, std::span<const double> in, std::span<double> out) {
  const int d = layout_->dim();
  if (static_cast<int>(term.factors.size()) != d) throw std::invalid_argument("TensorApplier: factor count mismatch");
  if (in.size() != size_ || out.size() != size_) throw std::invalid_argument("TensorApplier: vector size mismatch");
  std::vector<int> active;
  for (int m = 0; m < d; ++m) {
    if (term.factors[m]) active.push_back(m);
  }
  if (active.empty()) {
    for (std::size_t n = 0; n < size_; ++n) out[n] += term.coeff * in[n];
    return;
  }
  // The unsplit dimension is swept in every combination, the split ones in half
  // of them each, so the cheapest factor stays unsplit.
  const auto full_it = std::min_element(active.begin(), active.end(), [&](int a, int b) {
    return term.factors[a]->nnz_blocks() < term.factors[b]->nnz_blocks();
  });
  const int full = *full_it;
  std::vector<int> split;
  for (int m : active) {
    if (m != full) split.push_back(m);
  }
  const int combos = 1 << split.size();
  std::vector<std::pair<int, SweepPart>> seq;
  for (int mask = 0; mask < combos; ++mask) {
    bool skip = false;
    seq.clear();
    for (std::size_t s = 0; s < split.size(); ++s) {
      if (!(mask >> s & 1)) seq.emplace_back(split[s], SweepPart::upper);
    }
    seq.emplace_back(full, SweepPart::full);
    for (std::size_t s = 0; s < split.size(); ++s) {
      if (mask >> s & 1) {
        if (!term.factors[split[s]]->has_lower()) skip = true;
        seq.emplace_back(split[s], SweepPart::lower);
      }
    }
    if (skip) continue;
    std::span<const double> src = in;
    for (std::size_t s = 0; s < seq.size(); ++s) {
      const auto [m, part] = seq[s];
      if (s + 1 == seq.size()) {
        sweep(*layout_, order_, m, *term.factors[m], part, src, out, term.coeff, true, parallel_);
      } else {
        auto& dst = scratch_[s % 2];
        sweep(*layout_, order_, m, *term.factors[m], part, src, dst, 1.0, false, parallel_);
        src = dst;
      }
    }
  }
}

void apply_term_reference(const SparseLayout& layout, int order, const TensorTerm& term,
                          std::span<const double> in, std::span<double> out) {
  const int d = layout.dim();
  const int bs = ipow(order, d);
  const int n_el = layout.num_elements();
  std::vector<const double*> blocks(d);
  std::vector<double> cur(bs), next(bs);
  for (int re = 0; re < n_el; ++re) {
    for (int ce = 0; ce < n_el; ++ce) {
      bool connected = true;
      for (int m = 0; m < d && connected; ++m) {
        const int pr = layout.position(re, m);
        const int pc = layout.position(ce, m);
        if (!term.factors[m]) {
          connected = pr == pc;
          blocks[m] = nullptr;
        } else {
          blocks[m] = term.factors[m]->find(pr, pc);
          connected = blocks[m] != nullptr;
        }
      }
      if (!connected) continue;
      std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(ce) * bs, bs, cur.begin());
      for (int m = 0; m < d; ++m) {
        if (!blocks[m]) continue;
        const int outer = ipow(order, m);
        const int inner = ipow(order, d - 1 - m);
        std::fill(next.begin(), next.end(), 0.0);
        for (int s = 0; s < outer; ++s) {
          for (int i = 0; i < order; ++i) {
            for (int j = 0; j < order; ++j) {
              for (int b = 0; b < inner; ++b) {
                next[(s * order + i) * inner + b] += blocks[m][i * order + j] * cur[(s * order + j) * inner + b];
              }
            }
          }
        }
        cur.swap(next);
      }
      double* o = out.data() + static_cast<std::ptrdiff_t>(re) * bs;
      for (int b = 0; b < bs; ++b) o[b] += term.coeff * cur[b];
    }
  }
}

}  // namespace sgdg
