#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "causalbet/causal_info.hpp"
#include "causalbet/coding.hpp"
#include "causalbet/process.hpp"
#include "oracles.hpp"

using namespace causalbet;
namespace ct = causalbet::testing;

namespace {

double kraft_sum(std::span<const int> lengths) {
    double s = 0.0;
    for (int l : lengths)
        if (l > 0) s += std::ldexp(1.0, -l);
    return s;
}

}  // namespace

TEST_CASE("canonical prefix code basics") {
    const std::vector<int> lengths = {1, 2, 2};
    const std::vector<Codeword> code = canonical_prefix_code(lengths);
    CHECK(code[0].bits == 0b0);
    CHECK(code[1].bits == 0b10);
    CHECK(code[2].bits == 0b11);

    const std::vector<int> skip = {2, 0, 1, 2};  // symbol 1 has no codeword
    const std::vector<Codeword> code2 = canonical_prefix_code(skip);
    CHECK(code2[1].length == 0);
    CHECK(code2[2].bits == 0b0);
    CHECK(code2[0].bits == 0b10);
    CHECK(code2[3].bits == 0b11);

    CHECK_THROWS_AS(canonical_prefix_code(std::vector<int>{1, 1, 1}), std::invalid_argument);
}

TEST_CASE("canonical codes are prefix free on random length sets") {
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<int> pick_m(2, 10);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = pick_m(rng);
        const std::vector<double> p = ct::random_pmf(rng, m, true);
        std::vector<int> lengths(std::size_t(m), 0);
        for (int i = 0; i < m; ++i)
            lengths[std::size_t(i)] =
                std::max(1, int(std::ceil(-std::log2(p[std::size_t(i)]) - 1e-9)));
        REQUIRE(kraft_sum(lengths) <= 1.0 + 1e-12);
        const std::vector<Codeword> code = canonical_prefix_code(lengths);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                if (a == b) continue;
                const Codeword& ca = code[std::size_t(a)];
                const Codeword& cb = code[std::size_t(b)];
                if (ca.length == 0 || cb.length == 0 || ca.length > cb.length) continue;
                // ca must not be a prefix of cb (equal lengths: bits differ).
                CHECK((cb.bits >> (cb.length - ca.length)) != ca.bits);
            }
    }
}

TEST_CASE("bitstream packs, reads, and round-trips through bytes") {
    Bitstream s;
    s.push(0b101, 3);
    s.push(0b0110, 4);
    s.push(1, 1);
    CHECK(s.bit_count() == 8);
    std::size_t cursor = 0;
    CHECK(s.read(cursor, 3) == 0b101);
    CHECK(s.read(cursor, 4) == 0b0110);
    CHECK(s.read_bit(cursor));

    const std::vector<std::uint8_t> bytes = s.serialize();
    const Bitstream back = Bitstream::deserialize(bytes);
    CHECK(back == s);

    std::vector<std::uint8_t> bad = bytes;
    bad.push_back(0);
    CHECK_THROWS_AS(Bitstream::deserialize(bad), std::invalid_argument);
}

TEST_CASE("shannon lengths honor the ceiling rule and kraft") {
    const ProcessSpec spec = ct::dyadic_pair_spec();
    const CodeLengthProfile with_side = shannon_lengths(spec, 2, true);
    const CodeLengthProfile no_side = shannon_lengths(spec, 2, false);

    // Without side information each symbol has p = 1/4: two bits.
    for (int x = 0; x < 4; ++x) CHECK(no_side.length(0, 0, x) == 2);
    // With the side signal the conditional is 1/2 on two symbols.
    CHECK(with_side.length(0, 0, 0) == 1);
    CHECK(with_side.length(0, 0, 1) == 1);
    CHECK(with_side.length(0, 0, 2) == 0);  // impossible under y = 0
    CHECK(with_side.length(0, 1, 2) == 1);

    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 10; ++trial) {
        ct::RandomSpecOptions opt;
        opt.strictly_positive = trial % 2 == 0;
        const ProcessSpec rspec = ct::random_spec(rng, opt);
        for (const bool side : {false, true}) {
            const CodeLengthProfile prof = shannon_lengths(rspec, 3, side);
            for (const std::vector<int>& row : prof.lengths)
                for (std::size_t h = 0; h * std::size_t(prof.mx) < row.size(); ++h) {
                    const std::span<const int> lens(row.data() + h * std::size_t(prof.mx),
                                                    std::size_t(prof.mx));
                    bool any = false;
                    for (int l : lens) any = any || l > 0;
                    if (any) CHECK(kraft_sum(lens) <= 1.0 + 1e-12);
                }
        }
    }
}

TEST_CASE("expected rate sandwich around the causal entropy") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 12; ++trial) {
        const ProcessSpec spec = ct::random_spec(rng);
        const int n = 1 + trial % 3;
        const JointTable joint = joint_pmf(spec, n);

        const double h_causal = causal_entropy(joint);
        const double rate_with = expected_rate(shannon_lengths(spec, n, true), spec);
        CHECK(rate_with * n >= h_causal - 1e-9);
        CHECK(rate_with * n < h_causal + n);

        const double h_x = entropy_bits(joint.x_marginal(n));
        const double rate_no = expected_rate(shannon_lengths(spec, n, false), spec);
        CHECK(rate_no * n >= h_x - 1e-9);
        CHECK(rate_no * n < h_x + n);

        // Savings track the per-symbol directed information to within a bit.
        const double di = directed_information(joint).directed_info / n;
        CHECK(std::abs((rate_no - rate_with) - di) <= 1.0 + 1e-9);
    }
}

TEST_CASE("dyadic law: savings equal the directed information exactly") {
    const ProcessSpec spec = ct::dyadic_pair_spec();
    for (int n = 1; n <= 4; ++n) {
        const double rate_with = expected_rate(shannon_lengths(spec, n, true), spec);
        const double rate_no = expected_rate(shannon_lengths(spec, n, false), spec);
        CHECK(rate_no == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(rate_with == doctest::Approx(1.0).epsilon(1e-12));
        const double di = directed_information(joint_pmf(spec, n)).directed_info / n;
        CHECK(rate_no - rate_with == doctest::Approx(di).epsilon(1e-12));
    }
}

TEST_CASE("noiseless side channel pins the rate at one bit per symbol") {
    // q = 0: the conditional law of x given its y is deterministic, so every
    // history row carries a single mandatory one-bit codeword and the upper
    // sandwich bound is met with equality rather than strictly.
    const ProcessSpec spec = make_markov_bsc(0.2, 0.0);
    const int n = 4;
    const double rate_with = expected_rate(shannon_lengths(spec, n, true), spec);
    const double h_causal = causal_entropy(joint_pmf(spec, n));
    CHECK(h_causal == doctest::Approx(0.0));
    CHECK(rate_with * n == doctest::Approx(h_causal + n));
}

TEST_CASE("encode and decode invert each other along sampled paths") {
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 10; ++trial) {
        ct::RandomSpecOptions opt;
        opt.horizon = 4;
        const ProcessSpec spec = ct::random_spec(rng, opt);
        const int n = 4;
        for (const bool side : {false, true}) {
            const CodeLengthProfile prof = shannon_lengths(spec, n, side);
            const SamplePath path = sample_path(spec, n, 0, 1000 + std::uint64_t(trial));
            const Bitstream stream = encode_path(prof, path.x, path.y);
            CHECK(decode_path(prof, stream, path.y) == path.x);

            std::size_t expect_bits = 0;
            for (int t = 0; t < n; ++t) {
                const std::span<const int> x_prev(path.x.data(), std::size_t(t));
                const std::span<const int> y_seen(path.y.data(), std::size_t(t + 1));
                const std::uint64_t h =
                    side ? prof.history_index(x_prev, y_seen) : prof.history_index(x_prev, {});
                expect_bits += std::size_t(prof.length(t, h, path.x[std::size_t(t)]));
            }
            CHECK(stream.bit_count() == expect_bits);
        }
    }
}

TEST_CASE("encoding an impossible symbol is an error") {
    const ProcessSpec spec = ct::dyadic_pair_spec();
    const CodeLengthProfile prof = shannon_lengths(spec, 1, true);
    const std::vector<int> x = {2};
    const std::vector<int> y = {0};  // symbol 2 cannot occur with y = 0
    CHECK_THROWS_AS(encode_path(prof, x, y), std::invalid_argument);
}
