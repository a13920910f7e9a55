#pragma once

#include "palmflow/rng.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace palmflow {

// Lazily extended fair-bit sequence, the base state of the Bernoulli shift.
// The doubling map in floating point would collapse after ~53 steps; fresh
// bits on demand keep cylinder-hit events exact at any orbit length.
//
// The bit buffer is shared along one orbit lineage (step() just advances the
// offset). Orbits must stay on the worker that sampled them.
class BitStream {
public:
    explicit BitStream(Rng source, std::vector<std::uint8_t> prefix = {})
        : buf_(std::make_shared<Buffer>(Buffer{std::move(prefix), source})) {}

    int bit(std::size_t i) const {
        std::size_t want = offset_ + i;
        while (buf_->bits.size() <= want) buf_->bits.push_back(buf_->gen.fair_bit() ? 1 : 0);
        return buf_->bits[want];
    }

    BitStream shifted() const {
        BitStream s = *this;
        ++s.offset_;
        return s;
    }

private:
    struct Buffer {
        std::vector<std::uint8_t> bits;
        Rng gen;
    };
    std::shared_ptr<Buffer> buf_;
    std::size_t offset_ = 0;
};

// Base states for the built-in zoo: two-circle index, circle point, torus
// point, symbol sequence. The v1 zoo is closed, so a variant suffices.
using BaseState = std::variant<int, double, std::array<double, 2>, BitStream>;

// Pluggable base dynamics (Y, T, mu) together with the roof function r and
// its declared constants.
struct BaseSystem {
    std::string name;
    std::function<BaseState(const BaseState&)> step;
    std::function<BaseState(Rng&)> sample_mu;
    std::function<double(const BaseState&)> roof;
    double inf_roof = 0.0;
    std::optional<double> mean_roof;  // r-bar; empty means "estimate me"
    std::optional<double> sup_roof;   // enables exact rejection sampling of nu
};

// Membership predicate for a target set D in the base, with its measure.
struct TargetSet {
    std::string name;
    std::function<bool(const BaseState&)> member;
    std::optional<double> measure;  // mu(D); empty means "estimate me"
    std::function<BaseState(Rng&)> sample_conditional;  // mu restricted to D, may be null
};

// A point x = (y, s) of the suspension space, 0 <= s < roof(y).
struct SuspensionState {
    BaseState y;
    double s = 0.0;
};

} // namespace palmflow
