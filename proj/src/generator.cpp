#include "surge/generator.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace surge {

void GenConfig::validate() const {
    if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
    if (hotspots < 0) throw std::invalid_argument("hotspot count must be non-negative");
    if (!(skew >= 0.0 && skew <= 1.0)) throw std::invalid_argument("skew must lie in [0, 1]");
    if (skew > 0.0 && hotspots == 0) throw std::invalid_argument("skew > 0 needs hotspots");
    if (!(hotspot_sigma > 0.0)) throw std::invalid_argument("hotspot_sigma must be positive");
    if (!(extent.width() > 0.0 && extent.height() > 0.0))
        throw std::invalid_argument("extent must have positive area");
    if (w_min < 0 || w_max < w_min) throw std::invalid_argument("bad weight range");
    for (const auto& b : burst_schedule) {
        if (b.hotspot < 0 || b.hotspot >= hotspots)
            throw std::invalid_argument("burst names a missing hotspot");
        if (!(b.multiplier >= 0.0) || b.t_end < b.t_start)
            throw std::invalid_argument("bad burst window");
    }
}

namespace {

constexpr std::uint64_t kSpaceSalt = 0x5DEECE66DULL;
constexpr std::uint64_t kCentreSalt = 0x2545F4914F6CDD1DULL;

double multiplier(const GenConfig& gc, int h, double t) {
    double m = 1.0;
    for (const auto& b : gc.burst_schedule)
        if (b.hotspot == h && b.t_start <= t && t < b.t_end) m *= b.multiplier;
    return m;
}

}  // namespace

std::vector<Point> hotspot_centres(const GenConfig& gc) {
    std::mt19937_64 rng(gc.seed ^ kCentreSalt);
    const double inset = std::min(3.0 * gc.hotspot_sigma, 0.25 * std::min(gc.extent.width(), gc.extent.height()));
    std::uniform_real_distribution<double> ux(gc.extent.x_min + inset, gc.extent.x_max - inset);
    std::uniform_real_distribution<double> uy(gc.extent.y_min + inset, gc.extent.y_max - inset);
    std::vector<Point> c;
    for (int h = 0; h < gc.hotspots; ++h) {
        const double x = ux(rng);
        c.push_back({x, uy(rng)});
    }
    return c;
}

std::vector<SpatialObject> generate(const GenConfig& gc) {
    gc.validate();
    const auto centres = hotspot_centres(gc);
    std::mt19937_64 time_rng(gc.seed);
    std::mt19937_64 rng(gc.seed ^ kSpaceSalt);
    std::exponential_distribution<double> gap(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> ux(gc.extent.x_min, gc.extent.x_max);
    std::uniform_real_distribution<double> uy(gc.extent.y_min, gc.extent.y_max);
    std::normal_distribution<double> nd(0.0, gc.hotspot_sigma);
    std::uniform_int_distribution<int> weight(gc.w_min, gc.w_max);

    const int H = gc.hotspots;
    std::vector<double> share(static_cast<std::size_t>(H) + 1);
    std::vector<SpatialObject> out;
    out.reserve(gc.n);
    double t = gc.t0;
    for (std::size_t i = 0; i < gc.n; ++i) {
        // share[0] is the background, share[h + 1] hotspot h.
        share[0] = 1.0 - gc.skew;
        double total = share[0];
        for (int h = 0; h < H; ++h) {
            share[static_cast<std::size_t>(h) + 1] = gc.skew / H * multiplier(gc, h, t);
            total += share[static_cast<std::size_t>(h) + 1];
        }
        const double lambda = gc.rate / 3600.0 * total;
        t += gap(time_rng) / lambda;

        double u = unit(rng) * total;
        std::size_t src = 0;
        while (src + 1 < share.size() && u >= share[src]) u -= share[src++];
        double x, y;
        if (src == 0 || total <= 0.0) {
            x = ux(rng);
            y = uy(rng);
        } else {
            const Point c = centres[src - 1];
            x = std::clamp(c.x + nd(rng), gc.extent.x_min, gc.extent.x_max);
            y = std::clamp(c.y + nd(rng), gc.extent.y_min, gc.extent.y_max);
        }
        out.push_back({i, static_cast<double>(weight(rng)), x, y, t});
    }
    return out;
}

GenConfig default_workload() {
    GenConfig gc;
    gc.n = 100000;
    gc.rate = 36000.0;
    gc.hotspots = 8;
    gc.hotspot_sigma = 15.0;
    gc.skew = 0.6;
    gc.seed = 20240601;
    // Each hotspot bursts in turn: 200 s at 5x every 1000 s.
    const double span = static_cast<double>(gc.n) / (gc.rate / 3600.0);
    int h = 0;
    for (double s = 500.0; s < 4.0 * span; s += 1000.0, h = (h + 1) % gc.hotspots)
        gc.burst_schedule.push_back({s, s + 200.0, h, 5.0});
    return gc;
}

Query default_query() {
    Query q;
    q.width = 10.0;
    q.height = 10.0;
    q.window_len = 100.0;
    q.alpha = 0.5;
    return q;
}

GenConfig gen_config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    GenConfig gc;
    gc.n = j.value("n", gc.n);
    gc.rate = j.value("rate", gc.rate);
    gc.hotspots = j.value("hotspots", gc.hotspots);
    gc.hotspot_sigma = j.value("hotspot_sigma", gc.hotspot_sigma);
    gc.skew = j.value("skew", gc.skew);
    gc.seed = j.value("seed", gc.seed);
    gc.w_min = j.value("w_min", gc.w_min);
    gc.w_max = j.value("w_max", gc.w_max);
    gc.t0 = j.value("t0", gc.t0);
    if (j.contains("extent")) {
        const auto& e = j.at("extent");
        gc.extent = {e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>(), e.at(3).get<double>()};
    }
    if (j.contains("burst_schedule")) {
        for (const auto& b : j.at("burst_schedule"))
            gc.burst_schedule.push_back({b.at("t_start").get<double>(), b.at("t_end").get<double>(),
                                         b.at("hotspot").get<int>(), b.at("multiplier").get<double>()});
    }
    gc.validate();
    return gc;
}

std::string gen_config_to_json(const GenConfig& gc) {
    nlohmann::json j;
    j["n"] = gc.n;
    j["rate"] = gc.rate;
    j["hotspots"] = gc.hotspots;
    j["hotspot_sigma"] = gc.hotspot_sigma;
    j["skew"] = gc.skew;
    j["seed"] = gc.seed;
    j["w_min"] = gc.w_min;
    j["w_max"] = gc.w_max;
    j["t0"] = gc.t0;
    j["extent"] = {gc.extent.x_min, gc.extent.y_min, gc.extent.x_max, gc.extent.y_max};
    j["burst_schedule"] = nlohmann::json::array();
    for (const auto& b : gc.burst_schedule)
        j["burst_schedule"].push_back(
            {{"t_start", b.t_start}, {"t_end", b.t_end}, {"hotspot", b.hotspot}, {"multiplier", b.multiplier}});
    return j.dump(2);
}

}  // namespace surge
