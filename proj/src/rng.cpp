#include "bwflow/types.hpp"

namespace bwflow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng substream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
    // FNV-1a over the name keeps stream identity stable across builds.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    const std::uint64_t mixed = splitmix64(splitmix64(seed) ^ splitmix64(h) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    return Rng(mixed);
}

}  // namespace bwflow
