#include "causalbet/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "causalbet/errors.hpp"

namespace causalbet {

namespace {

constexpr int kMaxCodeLength = 64;

std::size_t pow_saturating(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::size_t>::max() / base)
            return std::numeric_limits<std::size_t>::max();
        r *= base;
    }
    return r;
}

int shannon_length(double p) {
    // The small slack keeps exactly-dyadic probabilities (p = 2^-k) at k bits
    // instead of rounding noise pushing them to k+1.
    const int l = int(std::ceil(-std::log2(p) - 1e-9));
    return std::clamp(l, 1, kMaxCodeLength);
}

// Kraft sum scaled by 2^64 so the check is exact integer arithmetic.
unsigned __int128 kraft_scaled(std::span<const int> lengths) {
    unsigned __int128 sum = 0;
    for (int l : lengths)
        if (l > 0) sum += (unsigned __int128)(1) << (64 - l);
    return sum;
}

constexpr unsigned __int128 kKraftOne = (unsigned __int128)(1) << 64;

// Shannon lengths for one conditional row, repaired to satisfy Kraft exactly.
// The epsilon slack above can only under-shoot on dyadic conditionals, so the
// repair lengthens codewords whose implied probability exceeds the true one.
void fill_row_lengths(std::span<const double> cond, std::span<int> out) {
    for (std::size_t x = 0; x < cond.size(); ++x)
        out[x] = cond[x] > 0.0 ? shannon_length(cond[x]) : 0;
    while (kraft_scaled(out) > kKraftOne) {
        std::size_t pick = cond.size();
        double worst = 0.0;
        for (std::size_t x = 0; x < cond.size(); ++x) {
            if (out[x] == 0 || out[x] >= kMaxCodeLength) continue;
            const double excess = std::ldexp(1.0, -out[x]) - cond[x];
            if (excess > worst) {
                worst = excess;
                pick = x;
            }
        }
        if (pick == cond.size())
            throw InternalInconsistencyError("cannot repair Kraft inequality for a code row");
        ++out[pick];
    }
}

}  // namespace

int CodeLengthProfile::length(int t, std::uint64_t hist, int x) const {
    return lengths[std::size_t(t)][std::size_t(hist) * std::size_t(mx) + std::size_t(x)];
}

std::uint64_t CodeLengthProfile::history_index(std::span<const int> x_prev,
                                               std::span<const int> y_seen) const {
    if (with_side_info) {
        if (y_seen.size() != x_prev.size() + 1)
            throw std::invalid_argument("history index: need y_seen one longer than x_prev");
        std::uint64_t idx = 0;
        for (std::size_t j = 0; j < x_prev.size(); ++j)
            idx = idx * std::uint64_t(mx * my) + std::uint64_t(pair_digit(x_prev[j], y_seen[j], my));
        return idx * std::uint64_t(my) + std::uint64_t(y_seen[x_prev.size()]);
    }
    std::uint64_t idx = 0;
    for (int x : x_prev) idx = idx * std::uint64_t(mx) + std::uint64_t(x);
    return idx;
}

CodeLengthProfile shannon_lengths(const ProcessSpec& spec, int n, bool with_side_info,
                                  std::size_t budget) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    const std::size_t B = std::size_t(spec.pair_count());
    const std::size_t required = pow_saturating(B, n);
    if (required > budget) throw EnumerationBudgetError(required, budget);

    CodeLengthProfile profile;
    profile.mx = spec.mx();
    profile.my = spec.my();
    profile.horizon = n;
    profile.with_side_info = with_side_info;
    profile.lengths.resize(std::size_t(n));

    const int mx = spec.mx(), my = spec.my();
    if (with_side_info) {
        for (int t = 0; t < n; ++t) {
            const std::size_t hists = pow_saturating(B, t) * std::size_t(my);
            auto& lens = profile.lengths[std::size_t(t)];
            lens.assign(hists * std::size_t(mx), 0);
            std::vector<double> cond(std::size_t(mx), 0.0);
            for (std::size_t h = 0; h < hists; ++h) {
                const std::uint64_t pair_hist = h / std::size_t(my);
                const int y = int(h % std::size_t(my));
                if (!spec.conditional_x(t, spec.reduce_history(t, pair_hist), y, cond)) continue;
                fill_row_lengths(cond, std::span<int>(lens).subspan(h * std::size_t(mx), std::size_t(mx)));
            }
        }
    } else {
        const JointTable joint = joint_pmf(spec, n, budget);
        std::vector<std::vector<double>> levels(std::size_t(n) + 1);
        levels[std::size_t(n)] = joint.x_marginal(n);
        for (int i = n; i >= 1; --i) {
            levels[std::size_t(i) - 1].assign(levels[std::size_t(i)].size() / std::size_t(mx), 0.0);
            for (std::size_t c = 0; c < levels[std::size_t(i)].size(); ++c)
                levels[std::size_t(i) - 1][c / std::size_t(mx)] += levels[std::size_t(i)][c];
        }
        std::vector<double> cond(std::size_t(mx), 0.0);
        for (int t = 0; t < n; ++t) {
            const auto& parent = levels[std::size_t(t)];
            const auto& child = levels[std::size_t(t) + 1];
            auto& lens = profile.lengths[std::size_t(t)];
            lens.assign(parent.size() * std::size_t(mx), 0);
            for (std::size_t h = 0; h < parent.size(); ++h) {
                if (parent[h] <= 0.0) continue;
                for (int x = 0; x < mx; ++x)
                    cond[std::size_t(x)] = child[h * std::size_t(mx) + std::size_t(x)] / parent[h];
                fill_row_lengths(cond, std::span<int>(lens).subspan(h * std::size_t(mx), std::size_t(mx)));
            }
        }
    }
    return profile;
}

double expected_rate(const CodeLengthProfile& profile, const ProcessSpec& spec,
                     std::size_t budget) {
    const int n = profile.horizon;
    const int mx = profile.mx, my = profile.my;
    const JointTable joint = joint_pmf(spec, n, budget);
    double total = 0.0;
    if (profile.with_side_info) {
        const std::size_t B = std::size_t(mx) * my;
        for (int t = 0; t < n; ++t) {
            const std::vector<double> level = joint.pair_prefix(t + 1);
            for (std::size_t c = 0; c < level.size(); ++c) {
                if (level[c] <= 0.0) continue;
                const std::size_t s = c % B;
                const std::uint64_t hist = (c / B) * std::size_t(my) + s % std::size_t(my);
                const int len = profile.length(t, hist, int(s / std::size_t(my)));
                if (len == 0)
                    throw InternalInconsistencyError("a positive-probability symbol has no codeword");
                total += level[c] * len;
            }
        }
    } else {
        std::vector<double> level = joint.x_marginal(n);
        std::vector<std::vector<double>> levels(std::size_t(n) + 1);
        levels[std::size_t(n)] = std::move(level);
        for (int i = n; i >= 1; --i) {
            levels[std::size_t(i) - 1].assign(levels[std::size_t(i)].size() / std::size_t(mx), 0.0);
            for (std::size_t c = 0; c < levels[std::size_t(i)].size(); ++c)
                levels[std::size_t(i) - 1][c / std::size_t(mx)] += levels[std::size_t(i)][c];
        }
        for (int t = 0; t < n; ++t) {
            const auto& cur = levels[std::size_t(t) + 1];
            for (std::size_t c = 0; c < cur.size(); ++c) {
                if (cur[c] <= 0.0) continue;
                const int len = profile.length(t, c / std::size_t(mx), int(c % std::size_t(mx)));
                if (len == 0)
                    throw InternalInconsistencyError("a positive-probability symbol has no codeword");
                total += cur[c] * len;
            }
        }
    }
    return total / n;
}

std::vector<Codeword> canonical_prefix_code(std::span<const int> lengths) {
    if (kraft_scaled(lengths) > kKraftOne)
        throw std::invalid_argument("code lengths violate the Kraft inequality");
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] < 0 || lengths[i] > kMaxCodeLength)
            throw std::invalid_argument("code length out of range");
        if (lengths[i] > 0) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (lengths[a] != lengths[b]) return lengths[a] < lengths[b];
        return a < b;
    });
    std::vector<Codeword> code(lengths.size());
    std::uint64_t next = 0;
    int prev_len = 0;
    for (std::size_t i : order) {
        next <<= (lengths[i] - prev_len);
        code[i] = Codeword{lengths[i], next};
        ++next;
        prev_len = lengths[i];
    }
    return code;
}

void Bitstream::push(std::uint64_t bits, int count) {
    if (count < 0 || count > 64) throw std::invalid_argument("bit count out of range");
    for (int i = count - 1; i >= 0; --i) {
        if (nbits_ % 8 == 0) bytes_.push_back(0);
        if ((bits >> i) & 1u) bytes_.back() |= std::uint8_t(0x80u >> (nbits_ % 8));
        ++nbits_;
    }
}

bool Bitstream::read_bit(std::size_t& cursor) const {
    if (cursor >= nbits_) throw std::out_of_range("bitstream exhausted");
    const bool bit = (bytes_[cursor / 8] >> (7 - cursor % 8)) & 1u;
    ++cursor;
    return bit;
}

std::uint64_t Bitstream::read(std::size_t& cursor, int count) const {
    std::uint64_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | std::uint64_t(read_bit(cursor));
    return v;
}

std::vector<std::uint8_t> Bitstream::serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(8 + bytes_.size());
    for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t((std::uint64_t(nbits_) >> (8 * i)) & 0xffu));
    out.insert(out.end(), bytes_.begin(), bytes_.end());
    return out;
}

Bitstream Bitstream::deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8) throw std::invalid_argument("bitstream header truncated");
    std::uint64_t nbits = 0;
    for (int i = 0; i < 8; ++i) nbits |= std::uint64_t(bytes[std::size_t(i)]) << (8 * i);
    const std::size_t payload = (std::size_t(nbits) + 7) / 8;
    if (bytes.size() != 8 + payload) throw std::invalid_argument("bitstream payload size mismatch");
    Bitstream s;
    s.nbits_ = std::size_t(nbits);
    s.bytes_.assign(bytes.begin() + 8, bytes.end());
    return s;
}

Bitstream encode_path(const CodeLengthProfile& profile, std::span<const int> x,
                      std::span<const int> y) {
    if (int(x.size()) != profile.horizon)
        throw std::invalid_argument("encode: path length must match the profile horizon");
    if (profile.with_side_info && y.size() < x.size())
        throw std::invalid_argument("encode: need side signal for every symbol");
    Bitstream out;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const std::uint64_t hist = profile.history_index(
            x.subspan(0, t), profile.with_side_info ? y.subspan(0, t + 1) : std::span<const int>{});
        const auto& lens = profile.lengths[t];
        const std::span<const int> row(lens.data() + hist * std::size_t(profile.mx),
                                       std::size_t(profile.mx));
        const std::vector<Codeword> code = canonical_prefix_code(row);
        const Codeword cw = code[std::size_t(x[t])];
        if (cw.length == 0)
            throw std::invalid_argument("encode: symbol has no codeword under this history");
        out.push(cw.bits, cw.length);
    }
    return out;
}

std::vector<int> decode_path(const CodeLengthProfile& profile, const Bitstream& stream,
                             std::span<const int> y) {
    if (profile.with_side_info && int(y.size()) < profile.horizon)
        throw std::invalid_argument("decode: need side signal for every symbol");
    std::vector<int> x;
    x.reserve(std::size_t(profile.horizon));
    std::size_t cursor = 0;
    for (int t = 0; t < profile.horizon; ++t) {
        const std::uint64_t hist = profile.history_index(
            x, profile.with_side_info ? y.subspan(0, std::size_t(t) + 1) : std::span<const int>{});
        const auto& lens = profile.lengths[std::size_t(t)];
        const std::span<const int> row(lens.data() + hist * std::size_t(profile.mx),
                                       std::size_t(profile.mx));
        const std::vector<Codeword> code = canonical_prefix_code(row);
        std::uint64_t acc = 0;
        int len = 0;
        int found = -1;
        while (found < 0) {
            acc = (acc << 1) | std::uint64_t(stream.read_bit(cursor));
            ++len;
            for (std::size_t s = 0; s < code.size(); ++s)
                if (code[s].length == len && code[s].bits == acc) {
                    found = int(s);
                    break;
                }
            if (len > kMaxCodeLength) throw std::invalid_argument("decode: no codeword matches");
        }
        x.push_back(found);
    }
    return x;
}

}  // namespace causalbet
