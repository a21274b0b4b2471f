#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "projector.hpp"
#include "rng.hpp"
#include "serialize.hpp"
#include "space.hpp"

using namespace obproj;

namespace {

Signal random_signal(const SpacePtr& s, SplitMix64& rng,
                     bool complex_entries = false) {
  Vec v(s->dim());
  for (int i = 0; i < v.size(); ++i)
    v[i] = Complex(2.0 * rng.uniform() - 1.0,
                   complex_entries ? 2.0 * rng.uniform() - 1.0 : 0.0);
  return Signal(s, std::move(v));
}

Mat operator_matrix(const ProjectorState& st) {
  const int n = st.space()->dim();
  Mat m(n, n);
  for (int j = 0; j < n; ++j)
    m.col(j) = st.apply(Signal::basis(st.space(), j)).values;
  return m;
}

double probe_distance(const ProjectorState& a, const ProjectorState& b,
                      SplitMix64& rng, int probes = 20) {
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const Signal f = random_signal(a.space(), rng);
    worst = std::max(worst, norm(a.apply(f) - b.apply(f)) / norm(f));
  }
  return worst;
}

}  // namespace

TEST_CASE("init orthonormalizes the null-space spanning set") {
  const SpacePtr e = Space::euclidean(3);
  const Signal e3 = Signal::basis(e, 2);

  ProjectorState empty(e, {}, 1e-10);
  CHECK(empty.wperp_basis().empty());
  CHECK(empty.size() == 0);

  ProjectorState single(e, {e3}, 1e-10);
  REQUIRE(single.wperp_basis().size() == 1);
  CHECK(norm(single.wperp_basis()[0] - e3) < 1e-14);

  ProjectorState collapsed(e, {e3, 2.0 * e3}, 1e-10);
  CHECK(collapsed.wperp_basis().size() == 1);
}

TEST_CASE("init rejects mixed spaces") {
  const SpacePtr e3 = Space::euclidean(3);
  const SpacePtr e4 = Space::euclidean(4);
  CHECK_THROWS_AS(ProjectorState(e3, {Signal::basis(e4, 0)}, 1e-10), Error);
}

TEST_CASE("first update reproduces the single-vector dual") {
  const SpacePtr e = Space::euclidean(3);
  ProjectorState st(e, {Signal::basis(e, 2)}, 1e-10);
  const UpdateReport r = st.update(Signal::basis(e, 0));
  CHECK(r.independent);
  REQUIRE(st.size() == 1);
  // u_1 = e_1 and ||u_1|| = 1, so the dual is e_1 itself
  CHECK(norm(st.duals()[0] - Signal::basis(e, 0)) < 1e-14);
}

TEST_CASE("dependent update keeps the operator fixed") {
  SplitMix64 rng(3);
  const SpacePtr e = Space::euclidean(3);
  ProjectorState st(e, {Signal::basis(e, 2)}, 1e-10);
  st.update(Signal::basis(e, 0));
  const ProjectorState before = st;

  const UpdateReport r = st.update(2.0 * Signal::basis(e, 0));
  CHECK_FALSE(r.independent);
  CHECK(st.size() == 2);
  CHECK(st.rank() == 1);
  CHECK(probe_distance(st, before, rng) <= 1e-12);
}

TEST_CASE("update rejects atoms inside the null space") {
  const SpacePtr e = Space::euclidean(3);
  const Signal e3 = Signal::basis(e, 2);

  ProjectorState st(e, {e3}, 1e-10);
  CHECK_THROWS_AS(st.update(2.0 * e3), Error);  // k = 0 case

  st.update(Signal::basis(e, 0));
  try {
    st.update(3.0 * e3);  // k > 0, u_new = 0 with nonzero atom
    FAIL("expected a direct-sum violation");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kDirectSumViolation);
  }
  CHECK(st.size() == 1);
}

TEST_CASE("recursive construction matches the direct Gram build") {
  const SpacePtr e = Space::euclidean(3);
  const Signal e1 = Signal::basis(e, 0);
  const Signal mix = e1 + Signal::basis(e, 1) + Signal::basis(e, 2);

  ProjectorState st(e, {Signal::basis(e, 2)}, 1e-10);
  st.update(e1);
  st.update(mix);

  const GramOracleResult oracle =
      direct_projector({e1, mix}, {Signal::basis(e, 2)}, 1e-12);
  CHECK((operator_matrix(st) - oracle.matrix()).norm() <= 1e-10);
}

TEST_CASE("annihilation, fixed points and idempotence") {
  SplitMix64 rng(9);
  const SpacePtr e = Space::euclidean(12);
  std::vector<Signal> wperp;
  for (int i = 0; i < 3; ++i) wperp.push_back(random_signal(e, rng));
  ProjectorState st(e, wperp, 1e-10);
  for (int i = 0; i < 5; ++i) st.update(random_signal(e, rng));
  REQUIRE(st.independent());

  for (const Signal& w : st.wperp_basis())
    CHECK(norm(st.apply(w)) <= 1e-10);
  for (const Signal& v : st.atoms())
    CHECK(norm(st.apply(v) - v) <= 1e-9 * norm(v));
  for (int t = 0; t < 10; ++t) {
    const Signal f = random_signal(e, rng);
    const Signal ef = st.apply(f);
    CHECK(norm(st.apply(ef) - ef) <= 1e-9 * norm(f));
  }

  // apply matches the oracle matrix on random signals
  const GramOracleResult oracle =
      direct_projector(st.atoms(), wperp, 1e-12);
  CHECK((operator_matrix(st) - oracle.matrix()).norm() <= 1e-10);
}

TEST_CASE("apply_pw equals the orthogonal projection onto the residual span") {
  SplitMix64 rng(13);
  const SpacePtr e = Space::euclidean(10);
  std::vector<Signal> wperp{random_signal(e, rng), random_signal(e, rng)};
  ProjectorState st(e, wperp, 1e-10);
  for (int i = 0; i < 4; ++i) st.update(random_signal(e, rng));

  for (const Signal& w : st.wperp_basis())
    CHECK(norm(st.apply_pw(w)) <= 1e-10);

  // k = 1 fixed point: apply_pw(u_1) = u_1
  ProjectorState one(e, wperp, 1e-10);
  one.update(random_signal(e, rng));
  const Signal& u1 = one.w_components()[0];
  CHECK(norm(one.apply_pw(u1) - u1) <= 1e-12 * norm(u1));

  for (int t = 0; t < 10; ++t) {
    const Signal f = random_signal(e, rng);
    const Signal lhs = st.apply_pw(f);
    const Signal rhs = project_orthonormal(st.q_basis(), f);
    CHECK(norm(lhs - rhs) <= 1e-10 * norm(f));
  }
}

TEST_CASE("case detection: independent updates have <u,dual> = 1") {
  SplitMix64 rng(15);
  const SpacePtr e = Space::euclidean(9);
  ProjectorState st(e, {random_signal(e, rng)}, 1e-10);
  for (int i = 0; i < 5; ++i) {
    st.update(random_signal(e, rng));
    const int k = st.size();
    const Complex s =
        inner_product(st.w_components()[k - 1], st.duals()[k - 1]);
    CHECK(std::abs(s - Complex(1, 0)) <= 1e-8);
  }
}

TEST_CASE("downdate of an independent atom reduces to the smaller projector") {
  const SpacePtr e = Space::euclidean(3);
  const Signal e1 = Signal::basis(e, 0);
  const Signal e12 = e1 + Signal::basis(e, 1);
  const Signal e3 = Signal::basis(e, 2);

  ProjectorState st(e, {e3}, 1e-10);
  st.update(e1);
  st.update(e12);
  const DowndateReport r = st.downdate(2);
  CHECK(r.removed_independent);
  CHECK(st.size() == 1);
  CHECK(st.rank() == 1);

  const GramOracleResult oracle = direct_projector({e1}, {e3}, 1e-12);
  CHECK((operator_matrix(st) - oracle.matrix()).norm() <= 1e-10);
}

TEST_CASE("downdate of a redundant atom keeps the operator fixed") {
  SplitMix64 rng(19);
  const SpacePtr e = Space::euclidean(3);
  ProjectorState st(e, {}, 1e-10);
  st.update(Signal::basis(e, 0));
  st.update(2.0 * Signal::basis(e, 0));  // dependent, zero dual
  const ProjectorState before = st;

  const DowndateReport r = st.downdate(2);
  CHECK_FALSE(r.removed_independent);
  CHECK(st.size() == 1);
  CHECK(probe_distance(st, before, rng) <= 1e-12);
}

TEST_CASE("downdate validates the index") {
  const SpacePtr e = Space::euclidean(3);
  ProjectorState st(e, {}, 1e-10);
  st.update(Signal::basis(e, 0));
  CHECK_THROWS_AS(st.downdate(0), Error);
  CHECK_THROWS_AS(st.downdate(2), Error);
}

TEST_CASE("update then downdate restores the duals exactly") {
  SplitMix64 rng(23);
  const SpacePtr e = Space::euclidean(14);
  std::vector<Signal> wperp{random_signal(e, rng), random_signal(e, rng)};
  ProjectorState st(e, wperp, 1e-10);
  for (int i = 0; i < 6; ++i) st.update(random_signal(e, rng));
  const std::vector<Signal> duals_before = st.duals();

  st.update(random_signal(e, rng));
  st.downdate(st.size());

  REQUIRE(st.duals().size() == duals_before.size());
  for (std::size_t i = 0; i < duals_before.size(); ++i)
    CHECK(norm(st.duals()[i] - duals_before[i]) <= 1e-9);
}

TEST_CASE("downdating the whole model empties the state") {
  const SpacePtr e = Space::euclidean(4);
  ProjectorState st(e, {Signal::basis(e, 3)}, 1e-10);
  st.update(Signal::basis(e, 0));
  st.downdate(1);
  CHECK(st.size() == 0);
  CHECK(st.rank() == 0);
  CHECK(norm(st.apply(Signal::basis(e, 0))) == 0.0);
}

TEST_CASE("incremental residual-basis policy agrees with recomputation") {
  SplitMix64 rng(27);
  const SpacePtr e = Space::euclidean(12);
  std::vector<Signal> wperp{random_signal(e, rng)};
  ProjectorState recompute(e, wperp, 1e-10);
  for (int i = 0; i < 5; ++i) recompute.update(random_signal(e, rng));
  ProjectorState incremental = recompute;
  incremental.set_q_basis_policy(QBasisPolicy::kIncremental);

  recompute.downdate(2);
  incremental.downdate(2);
  REQUIRE(incremental.q_basis().size() == recompute.q_basis().size());
  // same span: both bases must reproduce the same orthogonal projector
  for (int t = 0; t < 8; ++t) {
    const Signal f = random_signal(e, rng);
    CHECK(norm(project_orthonormal(recompute.q_basis(), f) -
               project_orthonormal(incremental.q_basis(), f)) <=
          1e-9 * norm(f));
  }

  // and the agreement survives a longer mixed edit sequence
  for (int step = 0; step < 40; ++step) {
    const double dice = rng.uniform();
    if (recompute.size() < 2 || (dice < 0.5 && recompute.size() < 8)) {
      const Signal a = random_signal(e, rng);
      recompute.update(a);
      incremental.update(a);
    } else if (dice < 0.8) {
      const int j = 1 + static_cast<int>(rng.below(recompute.size()));
      recompute.downdate(j);
      incremental.downdate(j);
    } else {
      const int j = 1 + static_cast<int>(rng.below(recompute.size()));
      const Signal a = random_signal(e, rng);
      recompute.replace(j, a);
      incremental.replace(j, a);
    }
    REQUIRE(incremental.q_basis().size() == recompute.q_basis().size());
    const Signal f = random_signal(e, rng);
    CHECK(norm(recompute.apply(f) - incremental.apply(f)) <=
          1e-9 * norm(f));
    CHECK(norm(project_orthonormal(recompute.q_basis(), f) -
               project_orthonormal(incremental.q_basis(), f)) <=
          1e-9 * norm(f));
  }
}

TEST_CASE("replace equals a fresh build on the new atom set") {
  SplitMix64 rng(29);
  const SpacePtr e = Space::euclidean(4);
  const Signal e1 = Signal::basis(e, 0);
  const Signal e2 = Signal::basis(e, 1);
  const Signal e3 = Signal::basis(e, 2);
  const Signal e4 = Signal::basis(e, 3);

  ProjectorState st(e, {e4}, 1e-10);
  st.update(e1);
  st.update(e2);
  st.replace(2, e3);

  ProjectorState fresh(e, {e4}, 1e-10);
  fresh.update(e1);
  fresh.update(e3);
  CHECK(probe_distance(st, fresh, rng) <= 1e-10);

  const GramOracleResult oracle = direct_projector({e1, e3}, {e4}, 1e-12);
  CHECK((operator_matrix(st) - oracle.matrix()).norm() <= 1e-10);
}

TEST_CASE("replacing an atom with itself keeps the operator") {
  SplitMix64 rng(33);
  const SpacePtr e = Space::euclidean(10);
  ProjectorState st(e, {random_signal(e, rng)}, 1e-10);
  for (int i = 0; i < 4; ++i) st.update(random_signal(e, rng));
  const ProjectorState before = st;
  st.replace(2, before.atoms()[1]);
  CHECK(probe_distance(st, before, rng) <= 1e-9);
}

TEST_CASE("replace with a null-space vector fails and restores the state") {
  SplitMix64 rng(35);
  const SpacePtr e = Space::euclidean(6);
  const Signal w = Signal::basis(e, 5);
  ProjectorState st(e, {w}, 1e-10);
  st.update(random_signal(e, rng));
  st.update(random_signal(e, rng));
  const ProjectorState before = st;

  CHECK_THROWS_AS(st.replace(1, 2.0 * w), Error);
  CHECK(st.size() == 2);
  CHECK(probe_distance(st, before, rng) == 0.0);
}

TEST_CASE("perturb_duals: zero shift, uniqueness, dependent invariance") {
  SplitMix64 rng(37);
  const SpacePtr e = Space::euclidean(8);
  ProjectorState st(e, {random_signal(e, rng)}, 1e-10);
  for (int i = 0; i < 3; ++i) st.update(random_signal(e, rng));

  SUBCASE("zero shifts return the duals unchanged") {
    std::vector<Signal> zeros(3, Signal::zero(e));
    const std::vector<Signal> out = st.perturb_duals(zeros);
    for (int i = 0; i < 3; ++i) CHECK(norm(out[i] - st.duals()[i]) == 0.0);
  }

  SUBCASE("independent atoms have unique duals") {
    std::vector<Signal> y;
    for (int i = 0; i < 3; ++i) y.push_back(random_signal(e, rng));
    const std::vector<Signal> out = st.perturb_duals(y);
    for (int i = 0; i < 3; ++i)
      CHECK(norm(out[i] - st.duals()[i]) <= 1e-9);
  }

  SUBCASE("dependent spanning sets admit many duals, same operator") {
    st.update(st.atoms()[0] - st.atoms()[2]);  // make the set dependent
    std::vector<Signal> y;
    for (int i = 0; i < 4; ++i) y.push_back(random_signal(e, rng));
    const std::vector<Signal> perturbed = st.perturb_duals(y);

    for (int t = 0; t < 20; ++t) {
      const Signal f = random_signal(e, rng);
      Signal alt = Signal::zero(e);
      for (int i = 0; i < 4; ++i)
        alt.values += inner_product(perturbed[i], f) * st.atoms()[i].values;
      CHECK(norm(alt - st.apply(f)) <= 1e-10 * norm(f));
    }
  }

  SUBCASE("length mismatch is rejected") {
    CHECK_THROWS_AS(st.perturb_duals({Signal::zero(e)}), Error);
  }
}

TEST_CASE("biorthogonality survives a mixed update/downdate/replace run") {
  SplitMix64 rng(43);
  const SpacePtr e = Space::euclidean(20);
  std::vector<Signal> wperp;
  for (int i = 0; i < 4; ++i) wperp.push_back(random_signal(e, rng));
  ProjectorState st(e, wperp, 1e-10);

  auto max_bio_dev = [&]() {
    double worst = 0.0;
    for (int m = 0; m < st.size(); ++m)
      for (int i = 0; i < st.size(); ++i) {
        const Complex g = inner_product(st.atoms()[m], st.duals()[i]);
        const Complex expect = m == i ? Complex(1, 0) : Complex(0, 0);
        worst = std::max(worst, std::abs(g - expect));
      }
    return worst;
  };

  for (int step = 0; step < 60; ++step) {
    const double dice = rng.uniform();
    if (st.size() < 2 || dice < 0.5) {
      if (st.size() < 10) st.update(random_signal(e, rng));
    } else if (dice < 0.75) {
      st.downdate(1 + static_cast<int>(rng.below(st.size())));
    } else {
      st.replace(1 + static_cast<int>(rng.below(st.size())),
                 random_signal(e, rng));
    }
    REQUIRE(st.independent());
    CHECK(max_bio_dev() <= 1e-8);
  }
}

TEST_CASE("state vectors satisfy the structural invariants") {
  SplitMix64 rng(49);
  const SpacePtr e = Space::euclidean(16);
  std::vector<Signal> wperp;
  for (int i = 0; i < 5; ++i) wperp.push_back(random_signal(e, rng));
  ProjectorState st(e, wperp, 1e-10);
  for (int i = 0; i < 6; ++i) st.update(random_signal(e, rng));
  st.downdate(3);
  st.replace(2, random_signal(e, rng));
  st.update(st.atoms()[0] + st.atoms()[1]);  // dependent, zero dual

  // every W-component is orthogonal to the null-space basis
  for (const Signal& u : st.w_components())
    for (const Signal& w : st.wperp_basis())
      CHECK(std::abs(inner_product(w, u)) <= 1e-10);

  // every dual lies in span(q_basis)
  for (const Signal& d : st.duals()) {
    const Signal residual = d - project_orthonormal(st.q_basis(), d);
    CHECK(norm(residual) <= 1e-10 * (1.0 + norm(d)));
  }

  CHECK(st.size() == 6);
  CHECK(st.rank() == 5);
}

TEST_CASE("complex atoms flow through the recursion correctly") {
  SplitMix64 rng(51);
  const SpacePtr e = Space::euclidean(8);
  std::vector<Signal> wperp{random_signal(e, rng, true)};
  std::vector<Signal> atoms;
  for (int i = 0; i < 3; ++i) atoms.push_back(random_signal(e, rng, true));

  ProjectorState st(e, wperp, 1e-10);
  for (const Signal& a : atoms) st.update(a);

  const GramOracleResult oracle = direct_projector(atoms, wperp, 1e-12);
  CHECK((operator_matrix(st) - oracle.matrix()).norm() <= 1e-10);
  for (int i = 0; i < 3; ++i)
    CHECK(norm(st.duals()[i] - oracle.duals[i]) <= 1e-9);
}

TEST_CASE("downdate refuses a numerically singular correction") {
  // A state whose case-detection product sits between the dependence
  // tolerance and the division guard: the correction 1/(1-s) would blow up.
  const SpacePtr e = Space::euclidean(2);
  const Signal e1 = Signal::basis(e, 0);
  const Signal e2 = Signal::basis(e, 1);
  Signal near_dual = e1;
  near_dual.values[0] = Complex(1.0 - 1e-15, 0.0);  // s = 1 - 1e-15

  ProjectorState st = ProjectorState::restore(
      e, {}, {e1, e2}, {e1, e2}, {near_dual, e2}, {e1, e2}, /*dep_tol=*/1e-16,
      {});
  try {
    st.downdate(1);
    FAIL("expected a degeneracy error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNumericalDegeneracy);
  }
}

TEST_CASE("constructor rejects bad tolerances") {
  const SpacePtr e = Space::euclidean(2);
  CHECK_THROWS_AS(ProjectorState(e, {}, 0.0), Error);
  CHECK_THROWS_AS(ProjectorState(e, {}, -1e-10), Error);
}

TEST_CASE("state round-trips through JSON bit for bit") {
  SplitMix64 rng(57);
  const SpacePtr g = Space::grid(0.0, 2.5, 96);
  std::vector<Signal> wperp{random_signal(g, rng), random_signal(g, rng)};
  ProjectorState st(g, wperp, 1e-10);
  for (int i = 0; i < 4; ++i) st.update(random_signal(g, rng, true));
  st.downdate(2);

  const std::string text = state_to_json(st);
  const ProjectorState back = state_from_json(text);

  CHECK(back.size() == st.size());
  CHECK(back.rank() == st.rank());
  CHECK(back.dep_tol() == st.dep_tol());
  CHECK(back.stats().independent_updates == st.stats().independent_updates);
  CHECK(back.stats().independent_downdates ==
        st.stats().independent_downdates);
  for (int i = 0; i < st.size(); ++i) {
    CHECK((back.atoms()[i].values - st.atoms()[i].values).norm() == 0.0);
    CHECK((back.duals()[i].values - st.duals()[i].values).norm() == 0.0);
    CHECK((back.w_components()[i].values - st.w_components()[i].values)
              .norm() == 0.0);
  }
  // serializing again yields identical bytes
  CHECK(state_to_json(back) == text);

  // the reloaded state keeps working
  ProjectorState mutated = back;
  mutated.update(random_signal(g, rng));
  CHECK(mutated.size() == st.size() + 1);
}
