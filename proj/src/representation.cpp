#include "evolint/representation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evolint/errors.hpp"

namespace evolint {

double operator_norm(const DenseOperator& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<DenseOperator> svd(m);
  return svd.singularValues()(0);
}

void require_unitary(const DenseOperator& u, double tol, const char* what) {
  if (u.rows() != u.cols()) throw PreconditionError(std::string(what) + ": U is not square");
  const double dev =
      (u.adjoint() * u - DenseOperator::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= tol)) {
    std::ostringstream os;
    os << what << ": U is not unitary (deviation " << dev << ")";
    throw PreconditionError(os.str());
  }
}

// --- RepresentationSpace --------------------------------------------------

RepresentationSpace::RepresentationSpace(std::shared_ptr<const GridEvolutionSpace> grid,
                                         std::size_t cap)
    : grid_(std::move(grid)), dimension_(grid_->point_count(grid_->full())) {
  if (dimension_ > cap) {
    std::ostringstream os;
    os << "Hilbert dimension " << dimension_ << " exceeds cap " << cap;
    throw CapExceeded(os.str());
  }
}

// --- DiagonalOperator -----------------------------------------------------

double DiagonalOperator::norm() const {
  double best = 0.0;
  for (const Complex v : diag_) best = std::max(best, std::abs(v));
  return best;
}

std::size_t DiagonalOperator::rank() const {
  return static_cast<std::size_t>(
      std::count_if(diag_.begin(), diag_.end(), [](Complex v) { return v != 0.0; }));
}

DiagonalOperator DiagonalOperator::adjoint() const {
  std::vector<Complex> out(diag_.size());
  std::transform(diag_.begin(), diag_.end(), out.begin(),
                 [](Complex v) { return std::conj(v); });
  return DiagonalOperator(std::move(out));
}

DiagonalOperator DiagonalOperator::operator*(const DiagonalOperator& other) const {
  if (size() != other.size()) throw StructuralError("diagonal operators differ in size");
  std::vector<Complex> out(diag_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = diag_[i] * other.diag_[i];
  return DiagonalOperator(std::move(out));
}

DiagonalOperator DiagonalOperator::operator-(const DiagonalOperator& other) const {
  if (size() != other.size()) throw StructuralError("diagonal operators differ in size");
  std::vector<Complex> out(diag_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = diag_[i] - other.diag_[i];
  return DiagonalOperator(std::move(out));
}

DenseOperator DiagonalOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(diag_.size());
  DenseOperator m = DenseOperator::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag_[static_cast<std::size_t>(i)];
  return m;
}

// --- Operator -------------------------------------------------------------

Operator::Operator(DiagonalOperator diag, std::shared_ptr<const DenseOperator> conjugator)
    : diag_(std::move(diag)), conjugator_(std::move(conjugator)) {
  if (conjugator_) {
    const auto n = static_cast<Eigen::Index>(diag_.size());
    if (conjugator_->rows() != n || conjugator_->cols() != n)
      throw StructuralError("conjugator dimension does not match operator");
  }
}

DenseOperator Operator::dense() const {
  if (!conjugator_) return diag_.dense();
  const DenseOperator& u = *conjugator_;
  const Vector d = Eigen::Map<const Vector>(diag_.entries().data(),
                                            static_cast<Eigen::Index>(diag_.size()));
  return u.adjoint() * d.asDiagonal() * u;
}

Complex Operator::trace() const {
  if (!conjugator_) {
    Complex t = 0.0;
    for (const Complex v : diag_.entries()) t += v;
    return t;
  }
  return dense().trace();
}

Operator Operator::adjoint() const { return Operator(diag_.adjoint(), conjugator_); }

Operator Operator::operator*(const Operator& other) const {
  if (conjugator_.get() != other.conjugator_.get())
    throw StructuralError("pair-form product needs a shared conjugator");
  return Operator(diag_ * other.diag_, conjugator_);
}

double distance(const Operator& a, const Operator& b) {
  if (a.is_diagonal() && b.is_diagonal()) return (a.diagonal() - b.diagonal()).norm();
  return operator_norm(a.dense() - b.dense());
}

double distance(const Operator& a, const DenseOperator& b) {
  return operator_norm(a.dense() - b);
}

double commutator_norm(const Operator& a, const Operator& b) {
  if (a.is_diagonal() && b.is_diagonal())
    return (a.diagonal() * b.diagonal() - b.diagonal() * a.diagonal()).norm();
  const DenseOperator da = a.dense();
  const DenseOperator db = b.dense();
  return operator_norm(da * db - db * da);
}

// --- SpectralMeasure ------------------------------------------------------

SpectralMeasure::SpectralMeasure(const RepresentationSpace& space, TimeSet t,
                                 std::shared_ptr<const DenseOperator> conjugator)
    : SpectralMeasure(space.grid_ptr(), t, std::move(conjugator)) {}

SpectralMeasure::SpectralMeasure(std::shared_ptr<const GridEvolutionSpace> grid, TimeSet t,
                                 std::shared_ptr<const DenseOperator> conjugator)
    : grid_(std::move(grid)),
      domain_(t),
      dimension_(grid_->point_count(grid_->full())),
      conjugator_(std::move(conjugator)) {
  if (!t.subset_of(grid_->full())) throw DomainError("SpectralMeasure: T is not inside the frame");
  if (conjugator_) {
    const auto n = static_cast<Eigen::Index>(dimension_);
    if (conjugator_->rows() != n || conjugator_->cols() != n)
      throw StructuralError("SpectralMeasure: conjugator has wrong dimension");
  }
}

SpectralMeasure SpectralMeasure::full(const RepresentationSpace& space) {
  return {space, space.grid().full()};
}

Operator SpectralMeasure::operator()(const PointSet& v) const {
  if (v.domain() != domain_ || v.universe() != grid_->point_count(domain_))
    throw DomainError("spectral measure evaluated on a set outside points(T)");
  const PointSet pre = grid_->preimage(v);
  std::vector<Complex> diag(dimension_);
  for (std::size_t x = 0; x < dimension_; ++x) diag[x] = pre.contains(x) ? 1.0 : 0.0;
  return Operator(DiagonalOperator(std::move(diag)), conjugator_);
}

// --- free functions -------------------------------------------------------

DiagonalOperator represent(const RepresentationSpace& space, const GridFunction& f) {
  const GridEvolutionSpace& grid = space.grid();
  if (f.domain() != grid.full()) throw DomainError("represent: f must live on the full grid");
  grid.require_function(f);
  return DiagonalOperator(f.values());
}

DiagonalOperator spectral_projection(const RepresentationSpace& space, TimeSet t,
                                     const PointSet& v) {
  return SpectralMeasure(space, t)(v).diagonal();
}

SpectralMeasure pushforward(const SpectralMeasure& e, TimeSet t) {
  if (e.domain() != e.grid().full())
    throw DomainError("pushforward: source measure must live over the full frame");
  if (!t.subset_of(e.domain())) throw DomainError("pushforward: T is not inside the frame");
  return {e.grid_ptr(), t, e.conjugator()};
}

Operator integrate(const GridFunction& f, const SpectralMeasure& e) {
  if (f.domain() != e.domain()) throw DomainError("integrate: f and E_T live over different T");
  const GridFunction full = pullback(e.grid(), f);
  return Operator(DiagonalOperator(full.values()), e.conjugator());
}

Operator integrate_atoms(const GridFunction& f, const SpectralMeasure& e) {
  if (f.domain() != e.domain()) throw DomainError("integrate: f and E_T live over different T");
  e.grid().require_function(f);
  const std::size_t atoms = f.size();
  std::vector<Complex> sum(e.dimension(), 0.0);
  for (std::size_t b = 0; b < atoms; ++b) {
    const std::size_t member[] = {b};
    const Operator atom = e(PointSet(e.domain(), atoms, member));
    for (std::size_t x = 0; x < sum.size(); ++x) sum[x] += f[b] * atom.diagonal()[x];
  }
  return Operator(DiagonalOperator(std::move(sum)), e.conjugator());
}

namespace {

std::shared_ptr<const DenseOperator> compose_conjugators(
    const std::shared_ptr<const DenseOperator>& existing, const DenseOperator& u) {
  if (!existing) return std::make_shared<const DenseOperator>(u);
  return std::make_shared<const DenseOperator>(*existing * u);
}

}  // namespace

SpectralMeasure conjugate(const DenseOperator& u, const SpectralMeasure& e) {
  require_unitary(u, 1e-10, "conjugate");
  if (u.rows() != static_cast<Eigen::Index>(e.dimension()))
    throw StructuralError("conjugate: U has wrong dimension");
  return {e.grid_ptr(), e.domain(), compose_conjugators(e.conjugator(), u)};
}

Operator conjugate(const DenseOperator& u, const Operator& op) {
  require_unitary(u, 1e-10, "conjugate");
  return Operator(op.diagonal(), compose_conjugators(op.conjugator(), u));
}

DenseOperator conjugate(const DenseOperator& u, const DenseOperator& op) {
  require_unitary(u, 1e-10, "conjugate");
  return u.adjoint() * op * u;
}

DiagonalOperator theta(const GridEvolutionSpace& grid, const GridFunction& f) {
  grid.require_function(f);
  return DiagonalOperator(f.values());
}

DiagonalOperator small_projection(const GridEvolutionSpace& grid, const PointSet& v) {
  return theta(grid, grid.indicator(v));
}

DiagonalOperator embed_eta(const GridEvolutionSpace& grid, TimeSet t,
                           const DiagonalOperator& op) {
  if (op.size() != grid.point_count(t))
    throw DomainError("embed_eta: operator does not act on H_T");
  const TimeSet full = grid.full();
  const std::size_t n = grid.point_count(full);
  std::vector<Complex> diag(n);
  for (std::size_t x = 0; x < n; ++x) diag[x] = op[grid.restrict_index(full, x, t)];
  return DiagonalOperator(std::move(diag));
}

DiagonalOperator embed_eta(const GridEvolutionSpace& grid, TimeSet t,
                           const DenseOperator& op) {
  const auto n = static_cast<Eigen::Index>(grid.point_count(t));
  if (op.rows() != n || op.cols() != n) throw DomainError("embed_eta: operator does not act on H_T");
  std::vector<Complex> diag(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (r != c && op(r, c) != 0.0)
        throw DomainError("embed_eta: operator is not diagonal in the Omega basis of H_T");
    }
    diag[static_cast<std::size_t>(r)] = op(r, r);
  }
  return embed_eta(grid, t, DiagonalOperator(std::move(diag)));
}

Complex matrix_element(const SpectralMeasure& e, std::size_t x, std::size_t y,
                       const PointSet& v) {
  if (x >= e.dimension() || y >= e.dimension())
    throw DomainError("matrix_element: basis label out of range");
  const Operator p = e(v);
  if (p.is_diagonal()) return x == y ? p.diagonal()[x] : Complex{0.0};
  const DenseOperator& u = *p.conjugator();
  Complex total = 0.0;
  for (Eigen::Index k = 0; k < u.rows(); ++k)
    total += std::conj(u(k, static_cast<Eigen::Index>(x))) *
             p.diagonal()[static_cast<std::size_t>(k)] * u(k, static_cast<Eigen::Index>(y));
  return total;
}

}  // namespace evolint
