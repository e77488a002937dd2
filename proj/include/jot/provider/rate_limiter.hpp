#pragma once

#include <chrono>
#include <mutex>
#include <optional>

namespace jot::provider {

/// Token-bucket throttle shared by all workers hitting one provider.
/// Default-constructed limiters never block.
class RateLimiter {
public:
    RateLimiter() = default;
    RateLimiter(double permits_per_second, double burst);

    /// Blocks until a permit is available.
    void acquire();

private:
    struct Bucket {
        double rate = 0.0;
        double burst = 0.0;
        double tokens = 0.0;
        std::chrono::steady_clock::time_point last;
    };

    std::mutex mutex_;
    std::optional<Bucket> bucket_;
};

} // namespace jot::provider
