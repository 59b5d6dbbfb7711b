#include "doctest.h"

#include <cmath>
#include <random>

#include "mnf/potentials.hpp"
#include "support.hpp"

using namespace mnf;
using testing::fd_gradient;
using testing::plain_context;
using testing::relative_error;

namespace {

FieldContext busy_context() {
  FieldContext ctx;
  ctx.target = {7.0, 5.0};
  ctx.peers = {{3.0, 6.5}, {8.5, 2.0}};
  ctx.obstacles = {{0, {5.0, 4.0}, 0.5}, {1, {2.0, 2.0}, 0.8}};
  ctx.allies = {{{1.0, 7.0}, {4.0, 1.0}}};
  ctx.workspace = Workspace{10.0, 8.0};
  ctx.params = {0.4, 12.0, 0.001, 2.5, 10.0, 0.05};
  return ctx;
}

// Random points that keep a margin from every object of busy_context().
std::vector<Vec2> sample_points(const FieldContext &ctx, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.3, 9.7), uy(0.3, 7.7);
  std::vector<Vec2> out;
  while (out.size() < n) {
    const Vec2 q{ux(rng), uy(rng)};
    if (psi_clearance(q, ctx) < 0.3) continue;
    if (dnf_clearance(q, ctx) < 0.3) continue;
    if (distance(q, ctx.target) < 0.1) continue;
    out.push_back(q);
  }
  return out;
}

}  // namespace

TEST_CASE("psi closed-form value") {
  PotentialParams p{1.0, 1.0, 0.0, 2.0, 10.0, 0.05};
  FieldContext ctx = plain_context({0.0, 0.0}, p);
  ctx.obstacles = {{0, {2.0, 0.0}, 0.0}};
  // 1 * 1^2 + (1/2) * 1^(1/2) * (1 / 1^2)
  CHECK(psi({1.0, 0.0}, ctx) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("psi vanishes at the target and is non-negative") {
  const FieldContext ctx = busy_context();
  CHECK(psi(ctx.target, ctx) == 0.0);
  for (Vec2 q : sample_points(ctx, 200, 3)) CHECK(psi(q, ctx) >= 0.0);
}

TEST_CASE("psi reduces to the quadratic when repulsion and association vanish") {
  FieldContext ctx = busy_context();
  ctx.params.lambda2 = 0.0;
  for (auto &a : ctx.allies) a.position = a.target;
  for (Vec2 q : sample_points(ctx, 50, 4)) {
    const double d = distance(q, ctx.target);
    CHECK(psi(q, ctx) == doctest::Approx(ctx.params.lambda1 * d * d).epsilon(1e-14));
  }
}

TEST_CASE("psi grows with the allies' remaining distance") {
  FieldContext near = busy_context();
  FieldContext far = near;
  far.allies[0].position = {0.5, 7.5};
  CHECK(far.association() > near.association());
  for (Vec2 q : sample_points(near, 20, 5)) CHECK(psi(q, far) > psi(q, near));
}

TEST_CASE("gradients agree with central differences") {
  const FieldContext ctx = busy_context();
  const double h = 1e-6 * ctx.workspace->diagonal();
  const auto points = sample_points(ctx, 200, 6);
  SUBCASE("psi") {
    for (Vec2 q : points) {
      const Vec2 fd = fd_gradient([&](Vec2 x) { return psi(x, ctx); }, q, h);
      CHECK(relative_error(grad_psi(q, ctx), fd) < 1e-5);
    }
  }
  SUBCASE("omega") {
    for (Vec2 q : points) {
      const Vec2 fd = fd_gradient([&](Vec2 x) { return omega(x, ctx.target, 10.0); }, q, h);
      CHECK(relative_error(grad_omega(q, ctx.target, 10.0).value, fd) < 1e-5);
    }
  }
  SUBCASE("dnf") {
    const DnfParams dnf{3.0};
    for (Vec2 q : points) {
      const Vec2 fd = fd_gradient([&](Vec2 x) { return dnf_baseline(x, ctx, dnf); }, q, h);
      CHECK(relative_error(grad_dnf_baseline(q, ctx, dnf), fd) < 1e-5);
    }
  }
}

TEST_CASE("psi Hessian agrees with differences of the gradient") {
  const FieldContext ctx = busy_context();
  const double h = 1e-6 * ctx.workspace->diagonal();
  for (Vec2 q : sample_points(ctx, 50, 7)) {
    const FieldDerivatives d = psi_derivatives(q, ctx);
    CHECK(d.value == doctest::Approx(psi(q, ctx)).epsilon(1e-14));
    CHECK(relative_error(d.gradient, grad_psi(q, ctx)) < 1e-14);
    const Vec2 hx = (1.0 / (2.0 * h)) * (grad_psi({q.x + h, q.y}, ctx) - grad_psi({q.x - h, q.y}, ctx));
    const Vec2 hy = (1.0 / (2.0 * h)) * (grad_psi({q.x, q.y + h}, ctx) - grad_psi({q.x, q.y - h}, ctx));
    CHECK(relative_error({d.hessian.xx, d.hessian.xy}, hx) < 1e-5);
    CHECK(relative_error({d.hessian.xy, d.hessian.yy}, hy) < 1e-5);
  }
}

TEST_CASE("large alpha leaves only the attractive gradient") {
  FieldContext ctx = busy_context();
  ctx.params.alpha = 1e6;
  const double a = ctx.association();
  for (Vec2 q : sample_points(ctx, 20, 8)) {
    const Vec2 limit = (2.0 * ctx.params.lambda1 + 2.0 * ctx.params.lambda3 * a) * (q - ctx.target);
    CHECK(relative_error(grad_psi(q, ctx), limit) < 1e-3);
  }
}

TEST_CASE("grad psi vanishes at the target of a pure quadratic") {
  PotentialParams p;
  p.lambda2 = 0.0;
  const FieldContext ctx = plain_context({2.0, 3.0}, p);
  CHECK(grad_psi(ctx.target, ctx) == Vec2{0.0, 0.0});
}

TEST_CASE("psi is singular on a repulsive object") {
  FieldContext ctx = busy_context();
  CHECK_THROWS_AS(psi(ctx.obstacles[0].center, ctx), SingularityError);
  CHECK_THROWS_AS(grad_psi(ctx.peers[1], ctx), SingularityError);
  try {
    psi(ctx.peers[0], ctx);
  } catch (const SingularityError &e) {
    CHECK(e.position() == ctx.peers[0]);
  }
}

TEST_CASE("kernel values") {
  CHECK(omega({1.0, 1.0}, {1.0, 1.0}, 10.0) == 0.0);
  CHECK(omega({2.0, 0.0}, {0.0, 0.0}, 10.0) == doctest::Approx(20.0));
  const KernelGradient g = grad_omega({3.0, 4.0}, {0.0, 0.0}, 1.0);
  CHECK_FALSE(g.at_target);
  CHECK(g.value.x == doctest::Approx(0.6));
  CHECK(g.value.y == doctest::Approx(0.8));
  const KernelGradient at = grad_omega({1.0, 2.0}, {1.0, 2.0}, 5.0);
  CHECK(at.at_target);
  CHECK(at.value == Vec2{0.0, 0.0});
  // homogeneous of degree one in the offset
  CHECK(omega({6.0, 8.0}, {0.0, 0.0}, 3.0) == doctest::Approx(2.0 * omega({3.0, 4.0}, {0.0, 0.0}, 3.0)));
}

TEST_CASE("mnf picks the branch by strict distance") {
  const FieldContext ctx = busy_context();
  const double r = 1.5;
  const PhasePredicate pred(ctx.target, r);
  const Vec2 dir{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};

  const MnfValue half = mnf::mnf(ctx.target + (r / 2.0) * dir, ctx, pred);
  CHECK(half.phase == Phase::Kernel);
  CHECK(half.value == doctest::Approx(ctx.params.beta * r / 2.0));

  const Vec2 far = ctx.target + 2.0 * r * dir;
  const MnfValue out = mnf::mnf(far, ctx, pred);
  CHECK(out.phase == Phase::Planning);
  CHECK(out.value == psi(far, ctx));

  const Vec2 edge = ctx.target + Vec2{r, 0.0};
  CHECK(mnf::mnf(edge, ctx, pred).phase == Phase::Planning);
  CHECK(grad_mnf(edge, ctx, pred) == grad_psi(edge, ctx));

  CHECK_THROWS_AS(PhasePredicate(ctx.target, 0.0), ScenarioError);
}

TEST_CASE("kernel is rotation invariant about the target") {
  const Vec2 t{1.0, -2.0};
  const Vec2 u{0.7, 1.9};
  for (int i = 0; i < 12; ++i) {
    const double a = 0.5 * i;
    const Vec2 r{std::cos(a) * u.x - std::sin(a) * u.y, std::sin(a) * u.x + std::cos(a) * u.y};
    CHECK(omega(t + r, t, 4.0) == doctest::Approx(omega(t + u, t, 4.0)).epsilon(1e-14));
  }
}

TEST_CASE("dnf baseline limits") {
  const FieldContext ctx = busy_context();
  CHECK(dnf_baseline(ctx.target, ctx) == 0.0);
  CHECK(grad_dnf_baseline(ctx.target, ctx) == Vec2{0.0, 0.0});
  const Obstacle &o = ctx.obstacles[0];
  double prev = 0.0;
  for (double gap : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double v = dnf_baseline(o.center + Vec2{-(o.radius + gap), 0.0}, ctx, DnfParams{3.0});
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(dnf_baseline(o.center + Vec2{o.radius, 0.0}, ctx), SingularityError);
  CHECK_THROWS_AS(DnfParams{0.5}.resolved(ctx), ScenarioError);
}

TEST_CASE("field context from a scenario") {
  const Scenario s = testing::two_agent_scenario();
  const CoalitionPartition part(s);
  const auto pos = s.start_positions();
  const FieldContext ctx = make_field_context(s, pos, 0, part, s.params);
  CHECK(ctx.target == s.agents[0].target);
  REQUIRE(ctx.peers.size() == 1);
  CHECK(ctx.peers[0] == s.agents[1].start);
  REQUIRE(ctx.allies.size() == 1);
  CHECK(ctx.association() == doctest::Approx(norm2(s.agents[1].start - s.agents[1].target)));
  CHECK(ctx.with_alpha(7.0).params.alpha == 7.0);
}
