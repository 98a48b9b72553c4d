#ifndef GDA_RNG_HPP
#define GDA_RNG_HPP

#include <cstdint>
#include <random>

namespace gda {

// SplitMix64 finalizer, used to derive independent engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

// A reproducible random stream identified by (seed, stream_id).
class RngStream
{
    public:
        RngStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0);

        // Uniform on the open interval (0,1).
        double uniform();
        double normal();
        std::uint64_t next_u64() { return engine_(); }

        std::uint64_t seed() const { return seed_; }
        std::uint64_t stream_id() const { return stream_id_; }

        // Child stream for replica r; deterministic in (seed, stream_id, r).
        RngStream substream(std::uint64_t r) const;

        std::mt19937_64& engine() { return engine_; }

    private:
        std::uint64_t seed_;
        std::uint64_t stream_id_;
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_;
};

} // namespace gda

#endif
