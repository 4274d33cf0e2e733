#include <mdeq/greens.hpp>

#include <mdeq/linalg.hpp>

namespace mdeq {

ResolventContext resolvent_context(const SystemSpec& spec, const L2Model& model,
                                   const PairSubspace& domain, Complex lambda,
                                   const Tolerances& tol) {
  if (!domain.has_reps())
    throw InvalidSpec("resolvent needs a domain with path representatives");
  if (domain.dim() != model.dim)
    throw NotInResolventSet("graph dimension " + std::to_string(domain.dim()) +
                            " differs from the space dimension " + std::to_string(model.dim));

  ResolventContext ctx;
  ctx.spec = spec;
  ctx.model = model;
  ctx.domain = domain;
  ctx.lambda = lambda;
  ctx.m = domain.basis.bottomRows(model.dim) - lambda * domain.basis.topRows(model.dim);
  if (model.dim > 0) {
    // Rank against the natural scale of g - lambda*u on an orthonormal pair
    // basis: a matrix of pure cancellation noise must count as zero, which
    // a relative test against its own largest singular value cannot see.
    const double scale = std::max(1.0, std::abs(lambda));
    Eigen::JacobiSVD<Matrix> svd(ctx.m);
    const auto count = [&](double cut) {
      int r = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cut * scale) ++r;
      return r;
    };
    const int rank = count(tol.rank);
    if (count(tol.rank / 10) != rank || count(tol.rank * 10) != rank)
      throw RankUnstable("resolvent rank decision is unstable at this lambda",
                         count(tol.rank * 10), count(tol.rank / 10));
    if (rank < model.dim)
      throw NotInResolventSet("the graph equation g - lambda*u = f is singular at this lambda");
  }
  ctx.lu.compute(ctx.m);
  ctx.l0 = l0_basis(spec, tol);
  ctx.nk = nk_spaces(spec, tau_grid(spec), ctx.l0, tol);
  return ctx;
}

BalancedPath resolvent_apply(const ResolventContext& ctx, const Vector& z_f,
                             const Tolerances& tol) {
  if (z_f.size() != ctx.model.dim)
    throw InvalidSpec("class vector length differs from dim L2(w)");
  BalancedPath path = propagate_path(ctx.spec, Complex(0.0),
                                     Vector::Zero(ctx.spec.n * (ctx.spec.N() + 1)),
                                     RightHandSide::zero(ctx.spec));
  if (ctx.model.dim > 0) {
    const Vector t = ctx.lu.solve(z_f);
    for (int i = 0; i < t.size(); ++i)
      add_scaled(path, t[i], ctx.domain.reps[static_cast<size_t>(i)]);
  }
  return canonicalize(ctx.spec, ctx.nk, ctx.l0, std::move(path), tol);
}

BalancedPath resolvent_apply(const ResolventContext& ctx, const RightHandSide& f,
                             const Tolerances& tol) {
  return resolvent_apply(ctx, class_of_rhs(ctx.model, f), tol);
}

KernelTable greens_table(const ResolventContext& ctx, const std::vector<double>& xs,
                         const Tolerances& tol) {
  KernelTable table;
  table.lambda = ctx.lambda;
  table.points = xs;
  const int n = ctx.spec.n;
  const int na = ctx.spec.N();

  // Column j of the (point, atom) block is the resolvent of the class of
  // the j-th coordinate vector placed at that atom.
  std::vector<std::vector<BalancedPath>> columns(static_cast<size_t>(na));
  for (int k = 0; k < na; ++k) {
    columns[static_cast<size_t>(k)].reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      std::vector<Vector> values(static_cast<size_t>(na), Vector::Zero(n));
      values[static_cast<size_t>(k)] = Vector::Unit(n, j);
      const Vector z = class_of_values(ctx.model, values);
      columns[static_cast<size_t>(k)].push_back(resolvent_apply(ctx, z, tol));
    }
  }

  table.K.resize(xs.size());
  table.G.resize(xs.size());
  for (size_t p = 0; p < xs.size(); ++p) {
    table.K[p].resize(static_cast<size_t>(na));
    table.G[p].resize(static_cast<size_t>(na));
    for (int k = 0; k < na; ++k) {
      Matrix block(n, n);
      for (int j = 0; j < n; ++j)
        block.col(j) = evaluate(ctx.spec, columns[static_cast<size_t>(k)][static_cast<size_t>(j)],
                                xs[p]);
      table.G[p][static_cast<size_t>(k)] =
          block * pinv_psd(ctx.spec.atoms[static_cast<size_t>(k)].dw, tol.rank);
      table.K[p][static_cast<size_t>(k)] = std::move(block);
    }
  }
  return table;
}

}  // namespace mdeq
