#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pmqkd/channel.hpp"

namespace pmqkd::montecarlo {

struct McConfig {
    std::uint64_t rounds = 1'000'000;
    std::uint64_t seed = 1;
    channel::ProtocolParams proto;
    channel::ChannelParams channelParams;
    channel::MisalignmentModel model{0.0};
};

enum Outcome : int { kNoClick = 0, kDoubleClick = 1, kSingleL = 2, kSingleR = 3 };

/// Per-round draws come from a counter-based generator keyed by (seed, round
/// index), so chunked parallel execution reproduces the serial stream exactly.
struct McResult {
    std::uint64_t rounds = 0;
    int dimension = 0;
    // counts[diff][outcome] with diff = (kappa_a - kappa_b) mod d
    std::vector<std::array<std::uint64_t, 4>> counts;

    std::uint64_t singles(channel::Detector det) const;
    double gain(channel::Detector det) const;
    double gainStdErr(channel::Detector det) const;
    /// Empirical bit-error vector; the R group is re-indexed by floor(d/2)
    /// to match the analytic convention.
    std::vector<double> bitError(channel::Detector det) const;
    std::vector<double> bitErrorStdErr(channel::Detector det) const;

    bool operator==(const McResult&) const = default;
};

McResult simulate(const McConfig& config);        // OpenMP over round chunks
McResult simulateSerial(const McConfig& config);  // plain-loop reference

}  // namespace pmqkd::montecarlo
