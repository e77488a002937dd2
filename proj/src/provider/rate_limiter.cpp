#include "jot/provider/rate_limiter.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace jot::provider {

RateLimiter::RateLimiter(double permits_per_second, double burst) {
    if (permits_per_second <= 0.0 || burst < 1.0) {
        throw std::invalid_argument("rate limiter needs a positive rate and burst >= 1");
    }
    Bucket bucket;
    bucket.rate = permits_per_second;
    bucket.burst = burst;
    bucket.tokens = burst;
    bucket.last = std::chrono::steady_clock::now();
    bucket_ = bucket;
}

void RateLimiter::acquire() {
    using clock = std::chrono::steady_clock;
    while (true) {
        std::chrono::duration<double> wait{0.0};
        {
            std::lock_guard lock(mutex_);
            if (!bucket_) return;
            auto now = clock::now();
            const double elapsed = std::chrono::duration<double>(now - bucket_->last).count();
            bucket_->tokens = std::min(bucket_->burst, bucket_->tokens + elapsed * bucket_->rate);
            bucket_->last = now;
            if (bucket_->tokens >= 1.0) {
                bucket_->tokens -= 1.0;
                return;
            }
            wait = std::chrono::duration<double>((1.0 - bucket_->tokens) / bucket_->rate);
        }
        std::this_thread::sleep_for(wait);
    }
}

} // namespace jot::provider
