// benchmark driver for the exhaustive category enumeration
#include <chrono>
#include <cstdio>

#include "finsite/enumerate.hpp"

int main(int argc, char** argv) {
    const int max_obj = argc > 1 ? std::atoi(argv[1]) : 1;
    const int max_mor = argc > 2 ? std::atoi(argv[2]) : 7;
    const auto start = std::chrono::steady_clock::now();
    auto census = finsite::enumeration_census(max_obj, max_mor);
    const auto stop = std::chrono::steady_clock::now();
    long long total = 0;
    for (const auto& [key, v] : census) {
        std::printf("(%d obj, %d mor): %lld\n", key.first, key.second, v);
        total += v;
    }
    std::printf("total %lld in %.2fs\n", total,
                std::chrono::duration<double>(stop - start).count());
    return 0;
}
