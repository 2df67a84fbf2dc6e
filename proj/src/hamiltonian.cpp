#include "ionssh/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "ionssh/error.hpp"

namespace ionssh {

void Hamiltonian::apply(double t, const cplx* x, cplx* y, const simd::KernelTable& k) const {
  const std::size_t n = dimension();
  k.csr_matvec(offdiag.view(), x, y);
  if (!static_diag.empty()) k.diag_accumulate(1.0, static_diag.data(), x, y, n);
  for (const DriveTerm& d : drives) {
    const double c = d.coeff(t);
    if (c != 0.0) k.diag_accumulate(c, d.profile.data(), x, y, n);
  }
}

std::vector<cplx> Hamiltonian::apply(double t, const std::vector<cplx>& x) const {
  if (x.size() != dimension()) throw ConfigError("hamiltonian: vector dimension mismatch");
  std::vector<cplx> y(x.size());
  apply(t, x.data(), y.data());
  return y;
}

RealMatrix Hamiltonian::dense(double t) const {
  const std::size_t n = dimension();
  RealMatrix h(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::uint64_t k = offdiag.row_ptr[r]; k < offdiag.row_ptr[r + 1]; ++k)
      h(r, offdiag.col[k]) += offdiag.val[k];
  for (std::size_t r = 0; r < n; ++r) {
    if (!static_diag.empty()) h(r, r) += static_diag[r];
    for (const DriveTerm& d : drives) h(r, r) += d.coeff(t) * d.profile[r];
  }
  return h;
}

namespace {

void check_cap(std::size_t estimate, std::size_t cap, const Basis& basis) {
  if (estimate > cap) {
    std::ostringstream msg;
    msg << "hamiltonian: " << estimate << " nonzeros in sector " << basis.sector_name()
        << " exceed the cap of " << cap << "; restrict to a fixed-magnetization sector";
    throw ConfigError(msg.str());
  }
}

}  // namespace

Hamiltonian build_xy_hamiltonian(const CouplingMatrix& dm, std::shared_ptr<const Basis> basis,
                                 std::size_t nnz_cap) {
  const int l = static_cast<int>(dm.size());
  if (!basis || basis->n_sites() != l) throw ConfigError("build_xy_hamiltonian: basis size mismatch");
  const std::size_t dim = basis->dimension();

  // Upper bound on nonzeros: every up/down pair can flip.
  std::size_t per_row = 0;
  if (basis->is_full()) {
    per_row = static_cast<std::size_t>(l / 2) * (l - l / 2);
  } else {
    per_row = static_cast<std::size_t>(basis->n_up()) * (l - basis->n_up());
  }
  check_cap(dim * per_row, nnz_cap, *basis);

  Hamiltonian h;
  h.basis = basis;
  h.label = "xy";
  SparseMatrix& m = h.offdiag;
  m.dim = dim;
  m.row_ptr.reserve(dim + 1);
  m.row_ptr.push_back(0);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::uint64_t s = basis->state(r);
    const std::size_t begin = m.val.size();
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j) {
        const double v = dm.values(i, j);
        if (v == 0.0) continue;
        const bool ui = (s >> i) & 1u, uj = (s >> j) & 1u;
        if (ui == uj) continue;
        const std::uint64_t t = s ^ ((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
        m.col.push_back(static_cast<std::uint32_t>(basis->index(t)));
        m.val.push_back(v);
      }
    // rows are short; insertion sort keeps the CSR columns ascending
    for (std::size_t a = begin + 1; a < m.val.size(); ++a)
      for (std::size_t b = a; b > begin && m.col[b - 1] > m.col[b]; --b) {
        std::swap(m.col[b - 1], m.col[b]);
        std::swap(m.val[b - 1], m.val[b]);
      }
    m.row_ptr.push_back(m.val.size());
  }
  return h;
}

Hamiltonian build_full_hamiltonian(const CouplingMatrix& cm, const FloquetDrive& drive,
                                   const std::optional<std::vector<int>>& site_labels) {
  drive.validate();
  const int l = static_cast<int>(cm.size());
  if (l < 1) throw ConfigError("build_full_hamiltonian: empty chain");
  if (l > kMaxFullDriveSites) {
    std::ostringstream msg;
    msg << "build_full_hamiltonian: L = " << l << " exceeds the full-space limit of "
        << kMaxFullDriveSites << " sites";
    throw ConfigError(msg.str());
  }
  std::vector<int> labels(l);
  if (site_labels) {
    if (static_cast<int>(site_labels->size()) != l)
      throw ConfigError("build_full_hamiltonian: one site label per spin required");
    labels = *site_labels;
  } else {
    for (int j = 0; j < l; ++j) labels[j] = j + 1;
  }

  auto basis = Basis::full(l);
  const std::size_t dim = basis->dimension();
  Hamiltonian h;
  h.basis = basis;
  h.label = "full_drive";

  SparseMatrix& m = h.offdiag;
  m.dim = dim;
  m.row_ptr.reserve(dim + 1);
  m.row_ptr.push_back(0);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t begin = m.val.size();
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j) {
        const double v = cm.values(i, j);
        if (v == 0.0) continue;
        m.col.push_back(static_cast<std::uint32_t>(r ^ ((std::size_t{1} << i) | (std::size_t{1} << j))));
        m.val.push_back(v);
      }
    for (std::size_t a = begin + 1; a < m.val.size(); ++a)
      for (std::size_t b = a; b > begin && m.col[b - 1] > m.col[b]; --b) {
        std::swap(m.col[b - 1], m.col[b]);
        std::swap(m.val[b - 1], m.val[b]);
      }
    m.row_ptr.push_back(m.val.size());
  }

  // sz_j / 2 = +-1/2; uniform part and the site-modulated part.
  std::vector<double> d0(dim), d1(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    double s0 = 0.0, s1 = 0.0;
    for (int j = 0; j < l; ++j) {
      const double z = ((r >> j) & 1u) ? 0.5 : -0.5;
      s0 += z;
      s1 += std::cos(drive.site_phase(labels[j])) * z;
    }
    d0[r] = drive.b0 * s0;
    d1[r] = s1;
  }
  if (drive.b0 != 0.0) h.static_diag = std::move(d0);
  const double amp = drive.amplitude();
  if (amp != 0.0) {
    const double w = drive.omega;
    h.drives.push_back({std::move(d1), [amp, w](double t) { return amp * std::cos(w * t); }});
  }
  return h;
}

}  // namespace ionssh
