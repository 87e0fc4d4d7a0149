#pragma once

#include "etsim/trigger.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace etsim {

enum class DelayKind {
    constant,        ///< every delay equals the sample bound
    uniform_random,  ///< delays drawn uniformly from [0, sample bound]
    adversarial_max, ///< alias of constant, kept for readable configs
};

/// Delay distribution for the channel; every sampled delay lies in
/// [0, gamma].
struct DelayPolicy {
    DelayKind kind = DelayKind::constant;
    double gamma = 0.0;
    std::uint64_t seed = 0;
};

/// The channel: accepts one packet at its send time and delivers it
/// unmodified once the current time reaches send time + delay.
///
/// At most one packet may be in flight (trigger suppression upstream makes
/// this an invariant; submitting while in flight throws ProtocolError).
/// The delay sample bound defaults to gamma; a grid simulator passes
/// gamma - h so delivery rounded up to its grid never exceeds gamma.
class DelayChannel {
public:
    explicit DelayChannel(const DelayPolicy& policy, double sample_bound = -1.0);

    /// Schedules delivery at t_send + delay, delay sampled per policy.
    void submit(const Packet& pkt, double t_send);

    /// Returns the packet once t_now has reached the scheduled delivery
    /// time, clearing the in-flight slot; std::nullopt otherwise.
    std::optional<Packet> poll(double t_now);

    [[nodiscard]] bool in_flight() const noexcept { return pending_.has_value(); }

    /// Scheduled delivery time of the in-flight packet; only meaningful
    /// while in_flight().
    [[nodiscard]] double scheduled_delivery() const noexcept { return t_deliver_; }

private:
    double sample_delay();

    DelayPolicy policy_;
    double sample_bound_;
    std::mt19937_64 rng_;
    std::optional<Packet> pending_;
    double t_deliver_ = 0.0;
};

} // namespace etsim
