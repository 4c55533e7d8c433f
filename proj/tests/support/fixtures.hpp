#ifndef PPLIST_TESTS_FIXTURES_HPP
#define PPLIST_TESTS_FIXTURES_HPP

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "pplist/aggregate.hpp"
#include "pplist/keys.hpp"
#include "pplist/pseudonym.hpp"

namespace pplist::fixture {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("pplist-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// One user, one tracer and a route of d stations, with a signed order.
struct Delivery {
    KeyPair user;
    KeyPair tracer;
    std::vector<KeyPair> stations;
    std::vector<PublicKey> route;
    Bytes m;
    Pseudonym pseudonym;
    RouteAggregate agg;
    AggregateSignature sigma;

    static Delivery make(std::size_t d, RandomSource& rng, std::string m = "order") {
        return make_for(KeyPair::generate(Role::user, rng), KeyPair::generate(Role::tracer, rng), d, rng,
                        std::move(m));
    }

    static Delivery make_for(KeyPair user, KeyPair tracer, std::size_t d, RandomSource& rng, std::string m) {
        Delivery x{std::move(user), std::move(tracer), {}, {}, Bytes(m.begin(), m.end()), {}, {}, {}};
        for (std::size_t i = 0; i < d; ++i) {
            x.stations.push_back(KeyPair::generate(Role::station, rng));
            x.route.push_back(x.stations.back().public_key());
        }
        x.pseudonym = derive_pseudonym(x.user, x.tracer.public_key(), x.m);
        x.agg = aggregate_keys(x.route);
        SignatureAccumulator acc(d);
        for (std::size_t i = 0; i < d; ++i) acc.absorb(station_sign(x.stations[i], x.agg, i + 1, x.pseudonym, x.m));
        x.sigma = acc.finish();
        return x;
    }
};

}  // namespace pplist::fixture

#endif  // PPLIST_TESTS_FIXTURES_HPP
