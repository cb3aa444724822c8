#include <doctest.h>

#include <cmath>

#include "qmbench/linalg.hpp"
#include "qmbench/rng.hpp"
#include "qmbench/table.hpp"

using namespace qmbench;

TEST_CASE("max_abs_norm picks the largest entry magnitude") {
  Mat m(2, 2);
  m << cplx(1, 0), cplx(0, -3), cplx(0.5, 0), cplx(2, 2);
  CHECK(max_abs_norm(m) == 3.0);  // |0 - 3i| beats |2 + 2i|; magnitudes, not real parts
}

TEST_CASE("symmetrize returns the Hermitian part") {
  Mat m(2, 2);
  m << cplx(1, 1), cplx(2, 0), cplx(0, 0), cplx(3, -1);
  const Mat s = symmetrize(m);
  CHECK(is_hermitian(s, tol_herm));
  CHECK(s(0, 0) == cplx(1, 0));
  CHECK(s(0, 1) == cplx(1, 0));
}

TEST_CASE("clip_probability clamps inside the band and rejects outside") {
  CHECK(clip_probability(-0.5e-9, "test") == 0.0);
  CHECK(clip_probability(1.0 + 0.5e-9, "test") == 1.0);
  CHECK(clip_probability(0.25, "test") == 0.25);
  CHECK_THROWS_AS(clip_probability(-1e-6, "test"), qm_error);
  CHECK_THROWS_AS(clip_probability(1.0 + 1e-6, "test"), qm_error);
}

TEST_CASE("counter rng is a pure function of (seed, counter)") {
  const CounterRng a(123), b(123), c(124);
  CHECK(a.word_at(7) == b.word_at(7));
  CHECK(a.word_at(7) != c.word_at(7));
  // Canonical splitmix64 first output from a zero state.  Frozen: every
  // seeded table in the project depends on this construction never changing.
  CHECK(mix64(0) == 0xe220a8397b1dcdafull);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const double u = a.uniform_at(i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("sequential rng normal moments are sane") {
  SequentialRng rng(42);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("uniform_index stays within bound") {
  SequentialRng rng(9);
  for (int i = 0; i < 1000; ++i) CHECK(rng.uniform_index(7) < 7);
}

TEST_CASE("format_double round-trips 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("fnv1a64 known offset basis and sensitivity") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") != fnv1a64("b"));
  CHECK(hex64(0xcbf29ce484222325ull) == "cbf29ce484222325");
}

TEST_CASE("render_table_csv shape check") {
  Table t;
  t.name = "x";
  t.comments = {"note"};
  t.columns = {"a", "b"};
  t.rows = {{1.0, 2.0}};
  const std::string body = render_table_csv(t);
  CHECK(body == "# note\na,b\n1,2\n");
  t.rows.push_back({1.0});
  CHECK_THROWS_AS(render_table_csv(t), qm_error);
}
