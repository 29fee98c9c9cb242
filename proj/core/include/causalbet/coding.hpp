#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "causalbet/process.hpp"

namespace causalbet {

// Per-history Shannon code lengths for the next x symbol. With side
// information, histories are keyed by (x^t, y^{t+1}); without, by x^t alone.
// Length 0 marks a symbol with no codeword (conditional probability zero).
struct CodeLengthProfile {
    int mx = 0;
    int my = 0;
    int horizon = 0;
    bool with_side_info = false;
    std::vector<std::vector<int>> lengths;  // lengths[t][hist * mx + x]

    int length(int t, std::uint64_t hist, int x) const;
    std::uint64_t history_index(std::span<const int> x_prev, std::span<const int> y_seen) const;
};

CodeLengthProfile shannon_lengths(const ProcessSpec& spec, int n, bool with_side_info,
                                  std::size_t budget = kDefaultEnumerationBudget);

// Expected code length in bits per symbol under the process law.
double expected_rate(const CodeLengthProfile& profile, const ProcessSpec& spec,
                     std::size_t budget = kDefaultEnumerationBudget);

struct Codeword {
    int length = 0;            // 0: symbol has no codeword
    std::uint64_t bits = 0;    // right-aligned, most significant bit first
};

// Canonical prefix code for the given lengths (0 entries skipped); codes
// assigned in (length, symbol) order. Lengths must satisfy Kraft.
std::vector<Codeword> canonical_prefix_code(std::span<const int> lengths);

class Bitstream {
public:
    void push(std::uint64_t bits, int count);
    std::uint64_t read(std::size_t& cursor, int count) const;
    bool read_bit(std::size_t& cursor) const;
    std::size_t bit_count() const noexcept { return nbits_; }

    // 8-byte little-endian bit count, then the packed payload.
    std::vector<std::uint8_t> serialize() const;
    static Bitstream deserialize(std::span<const std::uint8_t> bytes);

    bool operator==(const Bitstream& other) const = default;

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t nbits_ = 0;
};

// Sequential encoder: symbol t is coded with the history the decoder will
// hold at that point, so decoding needs only the bits so far and y^{t+1}.
Bitstream encode_path(const CodeLengthProfile& profile, std::span<const int> x,
                      std::span<const int> y);
std::vector<int> decode_path(const CodeLengthProfile& profile, const Bitstream& stream,
                             std::span<const int> y);

}  // namespace causalbet
