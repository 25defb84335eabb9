#include "evolint/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "evolint/errors.hpp"

namespace evolint {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kContractionTol = 1e-10;

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

void check_blocks(const WStarAlgebra& algebra, const std::vector<Matrix>& blocks,
                  const char* what) {
  if (blocks.size() != algebra.block_count()) {
    std::ostringstream os;
    os << what << ": expected " << algebra.block_count() << " blocks, got "
       << blocks.size();
    throw StructuralError(os.str());
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Eigen::Index n = algebra.block_dim(i);
    if (blocks[i].rows() != n || blocks[i].cols() != n) {
      std::ostringstream os;
      os << what << ": block " << i << " has shape " << blocks[i].rows() << "x"
         << blocks[i].cols() << ", expected " << n << "x" << n;
      throw StructuralError(os.str());
    }
  }
}

}  // namespace

void require_same_algebra(const WStarAlgebra& a, const WStarAlgebra& b,
                          const char* what) {
  if (!(a == b)) {
    throw StructuralError(std::string(what) + ": algebra mismatch (" +
                          a.describe() + " vs " + b.describe() + ")");
  }
}

// --- WStarAlgebra ---------------------------------------------------------

WStarAlgebra::WStarAlgebra(std::vector<Eigen::Index> block_dims)
    : block_dims_(std::move(block_dims)) {
  if (block_dims_.empty()) throw StructuralError("algebra needs at least one block");
  offsets_.reserve(block_dims_.size());
  for (const Eigen::Index n : block_dims_) {
    if (n < 1) throw StructuralError("block dimensions must be >= 1");
    offsets_.push_back(dimension_);
    dimension_ += n * n;
  }
}

std::string WStarAlgebra::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < block_dims_.size(); ++i) {
    if (i) os << "+";
    os << "M" << block_dims_[i];
  }
  return os.str();
}

// --- AlgebraElement -------------------------------------------------------

AlgebraElement::AlgebraElement(WStarAlgebra algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  check_blocks(algebra_, blocks_, "AlgebraElement");
}

AlgebraElement AlgebraElement::zero(const WStarAlgebra& algebra) {
  std::vector<Matrix> blocks;
  for (const Eigen::Index n : algebra.block_dims()) blocks.push_back(Matrix::Zero(n, n));
  return {algebra, std::move(blocks)};
}

AlgebraElement AlgebraElement::identity(const WStarAlgebra& algebra) {
  std::vector<Matrix> blocks;
  for (const Eigen::Index n : algebra.block_dims())
    blocks.push_back(Matrix::Identity(n, n));
  return {algebra, std::move(blocks)};
}

AlgebraElement AlgebraElement::random(const WStarAlgebra& algebra, SplitMix64& rng) {
  std::vector<Matrix> blocks;
  for (const Eigen::Index n : algebra.block_dims()) {
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rng.complex_normal();
    blocks.push_back(std::move(m));
  }
  return {algebra, std::move(blocks)};
}

AlgebraElement AlgebraElement::from_coordinates(const WStarAlgebra& algebra,
                                                const Vector& coords) {
  if (coords.size() != algebra.dimension())
    throw StructuralError("coordinate vector length does not match algebra");
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < algebra.block_count(); ++i) {
    const Eigen::Index n = algebra.block_dim(i);
    const Eigen::Index off = algebra.block_offset(i);
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = coords(off + r * n + c);
    blocks.push_back(std::move(m));
  }
  return {algebra, std::move(blocks)};
}

Vector AlgebraElement::coordinates() const {
  Vector v(algebra_.dimension());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Eigen::Index n = algebra_.block_dim(i);
    const Eigen::Index off = algebra_.block_offset(i);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) v(off + r * n + c) = blocks_[i](r, c);
  }
  return v;
}

double AlgebraElement::norm() const {
  double best = 0.0;
  for (const Matrix& b : blocks_) best = std::max(best, spectral_norm(b));
  return best;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& b : blocks_) blocks.push_back(b.adjoint());
  return {algebra_, std::move(blocks)};
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
  require_same_algebra(algebra_, other.algebra_, "AlgebraElement +");
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    blocks.push_back(blocks_[i] + other.blocks_[i]);
  return {algebra_, std::move(blocks)};
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const {
  require_same_algebra(algebra_, other.algebra_, "AlgebraElement -");
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    blocks.push_back(blocks_[i] - other.blocks_[i]);
  return {algebra_, std::move(blocks)};
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& other) const {
  require_same_algebra(algebra_, other.algebra_, "AlgebraElement *");
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    blocks.push_back(blocks_[i] * other.blocks_[i]);
  return {algebra_, std::move(blocks)};
}

AlgebraElement AlgebraElement::operator*(Complex scalar) const {
  std::vector<Matrix> blocks;
  for (const Matrix& b : blocks_) blocks.push_back(b * scalar);
  return {algebra_, std::move(blocks)};
}

// --- NormalFunctional -----------------------------------------------------

NormalFunctional::NormalFunctional(WStarAlgebra algebra, std::vector<Matrix> densities)
    : algebra_(std::move(algebra)), densities_(std::move(densities)) {
  check_blocks(algebra_, densities_, "NormalFunctional");
}

NormalFunctional NormalFunctional::trace_against(const AlgebraElement& density) {
  return {density.algebra(), density.blocks()};
}

Complex NormalFunctional::operator()(const AlgebraElement& a) const {
  require_same_algebra(algebra_, a.algebra(), "NormalFunctional");
  Complex total = 0.0;
  for (std::size_t i = 0; i < densities_.size(); ++i)
    total += (densities_[i] * a.block(i)).trace();
  return total;
}

// --- Automorphism ---------------------------------------------------------

Automorphism::Automorphism(WStarAlgebra algebra, std::vector<std::size_t> block_perm,
                           std::vector<Matrix> unitaries)
    : algebra_(std::move(algebra)),
      perm_(std::move(block_perm)),
      unitaries_(std::move(unitaries)) {
  const std::size_t k = algebra_.block_count();
  if (perm_.size() != k) throw StructuralError("block permutation has wrong length");
  std::vector<bool> seen(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = perm_[i];
    if (j >= k || seen[j]) throw StructuralError("block_perm is not a permutation");
    seen[j] = true;
    if (algebra_.block_dim(i) != algebra_.block_dim(j))
      throw StructuralError("block_perm maps between blocks of different dimension");
  }
  check_blocks(algebra_, unitaries_, "Automorphism");
  for (std::size_t i = 0; i < k; ++i) {
    const Matrix& u = unitaries_[i];
    const double dev =
        (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > kUnitaryTol) {
      std::ostringstream os;
      os << "Automorphism: block " << i << " is not unitary (deviation " << dev << ")";
      throw PreconditionError(os.str());
    }
  }
}

Automorphism Automorphism::identity(const WStarAlgebra& algebra) {
  std::vector<std::size_t> perm(algebra.block_count());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return {algebra, std::move(perm), AlgebraElement::identity(algebra).blocks()};
}

Automorphism Automorphism::haar(const WStarAlgebra& algebra, SplitMix64& rng) {
  std::vector<Matrix> us;
  for (const Eigen::Index n : algebra.block_dims()) us.push_back(haar_unitary(n, rng));
  return conjugation(algebra, std::move(us));
}

Automorphism Automorphism::conjugation(const WStarAlgebra& algebra,
                                       std::vector<Matrix> unitaries) {
  std::vector<std::size_t> perm(algebra.block_count());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return {algebra, std::move(perm), std::move(unitaries)};
}

AlgebraElement Automorphism::apply(const AlgebraElement& a) const {
  require_same_algebra(algebra_, a.algebra(), "apply_automorphism");
  std::vector<Matrix> out(algebra_.block_count());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[perm_[i]] = unitaries_[i] * a.block(i) * unitaries_[i].adjoint();
  return {algebra_, std::move(out)};
}

Automorphism Automorphism::inverse() const {
  const std::size_t k = algebra_.block_count();
  std::vector<std::size_t> perm(k);
  std::vector<Matrix> us(k);
  for (std::size_t i = 0; i < k; ++i) {
    perm[perm_[i]] = i;
    us[perm_[i]] = unitaries_[i].adjoint();
  }
  return {algebra_, std::move(perm), std::move(us)};
}

LinearMap Automorphism::to_linear_map() const {
  const Eigen::Index d = algebra_.dimension();
  Matrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const Vector e = Vector::Unit(d, j);
    m.col(j) = apply(AlgebraElement::from_coordinates(algebra_, e)).coordinates();
  }
  return {algebra_, std::move(m)};
}

Automorphism compose_automorphisms(const Automorphism& alpha, const Automorphism& beta) {
  require_same_algebra(alpha.algebra(), beta.algebra(), "compose_automorphisms");
  const std::size_t k = alpha.algebra().block_count();
  std::vector<std::size_t> perm(k);
  std::vector<Matrix> us(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t mid = beta.block_perm()[i];
    perm[i] = alpha.block_perm()[mid];
    us[i] = alpha.unitaries()[mid] * beta.unitaries()[i];
  }
  return {alpha.algebra(), std::move(perm), std::move(us)};
}

AlgebraElement apply_automorphism(const Automorphism& alpha, const AlgebraElement& a) {
  return alpha.apply(a);
}

// --- LinearMap ------------------------------------------------------------

LinearMap::LinearMap(WStarAlgebra algebra, Matrix coordinate_matrix)
    : algebra_(std::move(algebra)), matrix_(std::move(coordinate_matrix)) {
  const Eigen::Index d = algebra_.dimension();
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw StructuralError("LinearMap: coordinate matrix must be dim(A) x dim(A)");
}

LinearMap LinearMap::identity(const WStarAlgebra& algebra) {
  const Eigen::Index d = algebra.dimension();
  return {algebra, Matrix::Identity(d, d)};
}

LinearMap LinearMap::zero(const WStarAlgebra& algebra) {
  const Eigen::Index d = algebra.dimension();
  return {algebra, Matrix::Zero(d, d)};
}

LinearMap LinearMap::trace_average(const WStarAlgebra& algebra) {
  const Eigen::Index d = algebra.dimension();
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < algebra.block_count(); ++i) {
    const Eigen::Index n = algebra.block_dim(i);
    const Eigen::Index off = algebra.block_offset(i);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index s = 0; s < n; ++s)
        m(off + r * n + r, off + s * n + s) = 1.0 / static_cast<double>(n);
  }
  return {algebra, std::move(m)};
}

LinearMap LinearMap::pinching(const WStarAlgebra& algebra) {
  const Eigen::Index d = algebra.dimension();
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < algebra.block_count(); ++i) {
    const Eigen::Index n = algebra.block_dim(i);
    const Eigen::Index off = algebra.block_offset(i);
    for (Eigen::Index r = 0; r < n; ++r) m(off + r * n + r, off + r * n + r) = 1.0;
  }
  return {algebra, std::move(m)};
}

AlgebraElement LinearMap::apply(const AlgebraElement& a) const {
  require_same_algebra(algebra_, a.algebra(), "LinearMap::apply");
  return AlgebraElement::from_coordinates(algebra_, matrix_ * a.coordinates());
}

LinearMap LinearMap::operator+(const LinearMap& other) const {
  require_same_algebra(algebra_, other.algebra_, "LinearMap +");
  return {algebra_, matrix_ + other.matrix_};
}

LinearMap LinearMap::operator-(const LinearMap& other) const {
  require_same_algebra(algebra_, other.algebra_, "LinearMap -");
  return {algebra_, matrix_ - other.matrix_};
}

LinearMap LinearMap::operator*(Complex scalar) const { return {algebra_, matrix_ * scalar}; }

double estimate_operator_norm(const LinearMap& map, int samples, std::uint64_t seed) {
  const WStarAlgebra& algebra = map.algebra();
  double best = map.apply(AlgebraElement::identity(algebra)).norm();
  SplitMix64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    std::vector<Matrix> us;
    for (const Eigen::Index n : algebra.block_dims()) us.push_back(haar_unitary(n, rng));
    const AlgebraElement u(algebra, std::move(us));
    best = std::max(best, map.apply(u).norm());
  }
  return best;
}

// --- GridPointMap ---------------------------------------------------------

GridPointMap::GridPointMap(Automorphism alpha)
    : map_(std::move(alpha)), label_("automorphism") {}

GridPointMap::GridPointMap(LinearMap contraction, std::string label)
    : map_(std::move(contraction)), label_(std::move(label)) {
  const double norm = estimate_operator_norm(std::get<LinearMap>(map_), 64, 0x5EEDULL);
  if (norm > 1.0 + kContractionTol) {
    std::ostringstream os;
    os << "GridPointMap '" << label_ << "' is not a contraction (norm >= " << norm << ")";
    throw PreconditionError(os.str());
  }
}

const WStarAlgebra& GridPointMap::algebra() const {
  return std::visit([](const auto& m) -> const WStarAlgebra& { return m.algebra(); }, map_);
}

AlgebraElement GridPointMap::apply(const AlgebraElement& a) const {
  return std::visit([&](const auto& m) { return m.apply(a); }, map_);
}

LinearMap GridPointMap::as_linear_map() const {
  if (const auto* alpha = std::get_if<Automorphism>(&map_)) return alpha->to_linear_map();
  return std::get<LinearMap>(map_);
}

LinearMap operator-(const GridPointMap& lhs, const GridPointMap& rhs) {
  return lhs.as_linear_map() - rhs.as_linear_map();
}

// --- ElementaryTensor -----------------------------------------------------

ElementaryTensor::ElementaryTensor(AlgebraElement a, NormalFunctional g)
    : algebra_(a.algebra()) {
  add(std::move(a), std::move(g));
}

void ElementaryTensor::add(AlgebraElement a, NormalFunctional g) {
  require_same_algebra(algebra_, a.algebra(), "ElementaryTensor");
  require_same_algebra(algebra_, g.algebra(), "ElementaryTensor");
  pairs_.emplace_back(std::move(a), std::move(g));
}

ElementaryTensor ElementaryTensor::operator+(const ElementaryTensor& other) const {
  require_same_algebra(algebra_, other.algebra_, "ElementaryTensor +");
  ElementaryTensor out = *this;
  for (const auto& [a, g] : other.pairs_) out.pairs_.emplace_back(a, g);
  return out;
}

// --- verification ---------------------------------------------------------

double AutomorphismReport::max_deviation() const {
  return std::max({multiplicative, star, unital, isometric});
}

AutomorphismReport verify_automorphism(const GridPointMap& phi, int sample_count,
                                       std::uint64_t seed, double tol) {
  if (sample_count < 1) throw PreconditionError("verify_automorphism: sample_count < 1");
  const WStarAlgebra& algebra = phi.algebra();
  AutomorphismReport report;
  report.samples = sample_count;
  report.tolerance = tol;

  const AlgebraElement one = AlgebraElement::identity(algebra);
  report.unital = (phi.apply(one) - one).norm();

  SplitMix64 rng(seed);
  for (int s = 0; s < sample_count; ++s) {
    const AlgebraElement a = AlgebraElement::random(algebra, rng);
    const AlgebraElement b = AlgebraElement::random(algebra, rng);
    const AlgebraElement pa = phi.apply(a);
    const AlgebraElement pb = phi.apply(b);
    report.multiplicative =
        std::max(report.multiplicative, (phi.apply(a * b) - pa * pb).norm());
    report.star = std::max(report.star, (phi.apply(a.adjoint()) - pa.adjoint()).norm());
    report.isometric = std::max(report.isometric, std::abs(pa.norm() - a.norm()));
  }
  return report;
}

}  // namespace evolint
