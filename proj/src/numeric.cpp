#include "szeta/numeric.hpp"

#include <charconv>
#include <cmath>
#include <mutex>
#include <thread>
#include <vector>

namespace szeta {

void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    if (threads < 1) threads = 1;
    if (threads == 1 || count < 2 * threads) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    std::int64_t chunk = (count + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        std::int64_t lo = w * chunk;
        std::int64_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mutex);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

std::string fmt_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[48];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, end);
}

}  // namespace szeta
