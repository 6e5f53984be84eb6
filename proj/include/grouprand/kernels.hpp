#pragma once

// Batch kernels in two flavours: a serial reference and an OpenMP version.
// Both give identical results; draw i always uses stream seed.split(i), so
// output order and content never depend on scheduling.

#include <cstdint>
#include <exception>
#include <mutex>
#include <utility>
#include <vector>

#include "grouprand/rng.hpp"

namespace grouprand::kernels {

namespace serial {

std::uint64_t count_sl2z(std::int64_t bound);
std::uint64_t visible_points(std::int64_t radius);

/// Draws first .. first + count - 1 of the sequence defined by `seed`.
template <class T, class Draw>
std::vector<T> sample_range(std::uint64_t seed, std::uint64_t first, std::size_t count, Draw&& draw)
{
    const RandomStream root(seed);
    std::vector<T> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        RandomStream s = root.split(first + i);
        out.push_back(draw(s));
    }
    return out;
}

template <class T, class Draw>
std::vector<T> sample_batch(std::uint64_t seed, std::size_t count, Draw&& draw)
{
    return sample_range<T>(seed, 0, count, std::forward<Draw>(draw));
}

/// counts[index_of(draw_i)] for i < count; index_of returns an index below
/// support_size or throws.
template <class Draw, class IndexOf>
std::vector<std::uint64_t> tally(std::uint64_t seed, std::size_t count, std::size_t support_size, Draw&& draw,
                                 IndexOf&& index_of)
{
    const RandomStream root(seed);
    std::vector<std::uint64_t> counts(support_size, 0);
    for (std::size_t i = 0; i < count; ++i) {
        RandomStream s = root.split(i);
        ++counts[index_of(draw(s))];
    }
    return counts;
}

} // namespace serial

namespace parallel {

std::uint64_t count_sl2z(std::int64_t bound);
std::uint64_t visible_points(std::int64_t radius);

namespace detail {

class ErrorSlot {
public:
    void capture()
    {
        std::lock_guard lock(mutex_);
        if (!error_)
            error_ = std::current_exception();
    }
    void rethrow() const
    {
        if (error_)
            std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

} // namespace detail

template <class T, class Draw>
std::vector<T> sample_range(std::uint64_t seed, std::uint64_t first, std::size_t count, Draw&& draw)
{
    const RandomStream root(seed);
    std::vector<T> out(count);
    detail::ErrorSlot error;
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            RandomStream s = root.split(first + static_cast<std::uint64_t>(i));
            out[static_cast<std::size_t>(i)] = draw(s);
        } catch (...) {
            error.capture();
        }
    }
    error.rethrow();
    return out;
}

template <class T, class Draw>
std::vector<T> sample_batch(std::uint64_t seed, std::size_t count, Draw&& draw)
{
    return sample_range<T>(seed, 0, count, std::forward<Draw>(draw));
}

template <class Draw, class IndexOf>
std::vector<std::uint64_t> tally(std::uint64_t seed, std::size_t count, std::size_t support_size, Draw&& draw,
                                 IndexOf&& index_of)
{
    const RandomStream root(seed);
    std::vector<std::uint64_t> counts(support_size, 0);
    detail::ErrorSlot error;
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(support_size, 0);
#pragma omp for schedule(dynamic, 256) nowait
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                RandomStream s = root.split(static_cast<std::uint64_t>(i));
                ++local[index_of(draw(s))];
            } catch (...) {
                error.capture();
            }
        }
#pragma omp critical(grouprand_tally_merge)
        for (std::size_t k = 0; k < support_size; ++k)
            counts[k] += local[k];
    }
    error.rethrow();
    return counts;
}

} // namespace parallel

} // namespace grouprand::kernels
