#include "pmqkd/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pmqkd::montecarlo {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
constexpr int kDrawsPerRound = 6;

// splitmix64 output function; the full stream is indexed by a counter, which
// makes any chunking of rounds reproduce the serial draws bit for bit.
std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double uniform(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t bits = mix(seed + (counter + 1) * kGamma);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

struct Tally {
    std::vector<std::array<std::uint64_t, 4>> counts;
};

void runRounds(const McConfig& cfg, std::uint64_t begin, std::uint64_t end, Tally& tally) {
    const int d = cfg.proto.dimension;
    const double mu = cfg.proto.intensity;
    for (std::uint64_t i = begin; i < end; ++i) {
        const std::uint64_t base = i * kDrawsPerRound;
        const int ka = static_cast<int>(uniform(cfg.seed, base + 0) * d);
        const int kb = static_cast<int>(uniform(cfg.seed, base + 1) * d);
        const double delta =
            cfg.model.sampleDelta(uniform(cfg.seed, base + 2), uniform(cfg.seed, base + 3));
        const int diff = ((ka - kb) % d + d) % d;
        const double psi = 2.0 * std::numbers::pi * diff / d + delta;

        const auto [pL, pR] = channel::clickProbs(mu, psi, cfg.channelParams);
        const bool clickL = uniform(cfg.seed, base + 4) < pL;
        const bool clickR = uniform(cfg.seed, base + 5) < pR;

        Outcome outcome = kNoClick;
        if (clickL && clickR)
            outcome = kDoubleClick;
        else if (clickL)
            outcome = kSingleL;
        else if (clickR)
            outcome = kSingleR;
        ++tally.counts[diff][outcome];
    }
}

McResult finalize(const McConfig& cfg, Tally tally) {
    McResult res;
    res.rounds = cfg.rounds;
    res.dimension = cfg.proto.dimension;
    res.counts = std::move(tally.counts);
    return res;
}

}  // namespace

McResult simulateSerial(const McConfig& cfg) {
    cfg.proto.validate();
    cfg.channelParams.validate();
    Tally tally{std::vector<std::array<std::uint64_t, 4>>(cfg.proto.dimension, {0, 0, 0, 0})};
    runRounds(cfg, 0, cfg.rounds, tally);
    return finalize(cfg, std::move(tally));
}

McResult simulate(const McConfig& cfg) {
    cfg.proto.validate();
    cfg.channelParams.validate();
    const int d = cfg.proto.dimension;
    constexpr std::uint64_t kChunk = 16384;
    const long long nChunks = static_cast<long long>((cfg.rounds + kChunk - 1) / kChunk);
    Tally total{std::vector<std::array<std::uint64_t, 4>>(d, {0, 0, 0, 0})};
#pragma omp parallel
    {
        Tally local{std::vector<std::array<std::uint64_t, 4>>(d, {0, 0, 0, 0})};
#pragma omp for schedule(static)
        for (long long c = 0; c < nChunks; ++c)
            runRounds(cfg, c * kChunk,
                      std::min<std::uint64_t>((c + 1) * kChunk, cfg.rounds), local);
#pragma omp critical
        {
            for (int k = 0; k < d; ++k)
                for (int o = 0; o < 4; ++o) total.counts[k][o] += local.counts[k][o];
        }
    }
    return finalize(cfg, std::move(total));
}

std::uint64_t McResult::singles(channel::Detector det) const {
    const int outcome = det == channel::Detector::L ? kSingleL : kSingleR;
    std::uint64_t n = 0;
    for (const auto& row : counts) n += row[outcome];
    return n;
}

double McResult::gain(channel::Detector det) const {
    return static_cast<double>(singles(det)) / static_cast<double>(rounds);
}

double McResult::gainStdErr(channel::Detector det) const {
    const double p = gain(det);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(rounds));
}

std::vector<double> McResult::bitError(channel::Detector det) const {
    const int outcome = det == channel::Detector::L ? kSingleL : kSingleR;
    const int shift = det == channel::Detector::R ? dimension / 2 : 0;
    const double n = static_cast<double>(singles(det));
    std::vector<double> e(dimension, 0.0);
    if (n == 0.0) return e;
    for (int k = 0; k < dimension; ++k)
        e[k] = static_cast<double>(counts[(k + shift) % dimension][outcome]) / n;
    return e;
}

std::vector<double> McResult::bitErrorStdErr(channel::Detector det) const {
    const auto e = bitError(det);
    const double n = static_cast<double>(singles(det));
    std::vector<double> se(dimension, 0.0);
    if (n == 0.0) return se;
    for (int k = 0; k < dimension; ++k) se[k] = std::sqrt(e[k] * (1.0 - e[k]) / n);
    return se;
}

}  // namespace pmqkd::montecarlo
