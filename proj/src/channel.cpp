#include "etsim/channel.hpp"

#include "etsim/errors.hpp"

#include <stdexcept>
#include <string>

namespace etsim {

namespace {

// Uniform double in [0, 1) from the full 64-bit state; mt19937_64 is
// specified exactly by the standard, so sequences are bit-reproducible.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

DelayChannel::DelayChannel(const DelayPolicy& policy, double sample_bound)
    : policy_(policy),
      sample_bound_(sample_bound < 0.0 ? policy.gamma : sample_bound),
      rng_(policy.seed) {
    if (policy_.gamma < 0.0)
        throw std::invalid_argument("DelayPolicy: gamma must be >= 0");
    if (sample_bound_ > policy_.gamma)
        throw std::invalid_argument("DelayChannel: sample bound exceeds gamma");
}

double DelayChannel::sample_delay() {
    switch (policy_.kind) {
    case DelayKind::constant:
    case DelayKind::adversarial_max:
        return sample_bound_;
    case DelayKind::uniform_random:
        return unit_uniform(rng_) * sample_bound_;
    }
    throw std::logic_error("unknown DelayKind");
}

void DelayChannel::submit(const Packet& pkt, double t_send) {
    if (pending_)
        throw ProtocolError("DelayChannel: submit at t = " + std::to_string(t_send) +
                            " while a packet is already in flight");
    pending_ = pkt;
    t_deliver_ = t_send + sample_delay();
}

std::optional<Packet> DelayChannel::poll(double t_now) {
    if (!pending_ || t_now < t_deliver_)
        return std::nullopt;
    std::optional<Packet> out;
    out.swap(pending_);
    return out;
}

} // namespace etsim
