// surge: continuous bursty-region detection over a weighted point stream.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "surge/bench.hpp"
#include "surge/detector.hpp"
#include "surge/generator.hpp"
#include "surge/oracle.hpp"
#include "surge/stream_io.hpp"
#include "surge/window.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

surge::Box parse_area(const std::string& s) {
    const auto f = split(s, ',');
    if (f.size() != 4) throw InputError("--area expects x0,y0,x1,y1");
    try {
        return {std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3])};
    } catch (const std::exception&) {
        throw InputError("--area has a non-numeric field: " + s);
    }
}

// 0 means per-event.
double parse_emit(const std::string& s) {
    if (s == "per-event") return 0.0;
    if (s.rfind("interval:", 0) == 0) {
        try {
            const double v = std::stod(s.substr(9));
            if (v > 0.0 && std::isfinite(v)) return v;
        } catch (const std::exception&) {
        }
    }
    throw InputError("--emit expects per-event or interval:<seconds>, got " + s);
}

std::string read_text(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct Options {
    std::string algo = "ccs";
    double width = 1.0;
    double height = 1.0;
    double window = 1.0;
    double alpha = 0.5;
    int k = 1;
    std::string area;
    std::string emit = "per-event";
    std::string bound_mode = "both";
    std::string gen;
    bool bench = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::string input = "-";
    std::string output = "-";
    bool follow = false;
    double idle_exit = 0.0;
    bool drain = false;
    std::size_t warmup = 0;
};

surge::Query make_query(const Options& o) {
    surge::Query q;
    q.width = o.width;
    q.height = o.height;
    q.window_len = o.window;
    q.alpha = o.alpha;
    q.k = o.k;
    if (!o.area.empty()) q.area = parse_area(o.area);
    q.validate();
    return q;
}

int run_gen(const Options& o, std::ostream& out) {
    surge::GenConfig gc;
    if (o.gen == "default")
        gc = surge::default_workload();
    else
        gc = surge::gen_config_from_json(o.gen.front() == '{' ? o.gen : read_text(o.gen));
    if (o.seed) gc.seed = *o.seed;
    if (o.n) gc.n = *o.n;
    const auto objs = surge::generate(gc);
    surge::write_csv(out, objs);
    return 0;
}

int run_bench(const Options& o, std::istream& in, std::ostream& out) {
    const auto q = make_query(o);
    const auto mode = surge::parse_bound_mode(o.bound_mode);
    if (!mode) throw InputError("unknown bound mode " + o.bound_mode);
    std::vector<surge::BenchSpec> specs;
    for (const auto& name : split(o.algo, ',')) {
        const auto a = surge::parse_algo(name);
        if (!a) throw InputError("unknown algorithm " + name);
        specs.push_back({*a, *mode});
    }
    const auto objs = surge::read_stream(in);
    surge::BenchOptions bo;
    bo.warmup_events = o.warmup;
    const auto rep = surge::run_bench(std::span<const surge::SpatialObject>(objs), q, specs, bo);
    std::cerr << surge::report_table(rep);
    out << surge::report_to_json(rep) << '\n';
    return 0;
}

int run_replay(const Options& o, std::istream& in, std::ostream& out) {
    const auto q = make_query(o);
    const auto algo = surge::parse_algo(o.algo);
    if (!algo) throw InputError("unknown algorithm " + o.algo);
    const auto mode = surge::parse_bound_mode(o.bound_mode);
    if (!mode) throw InputError("unknown bound mode " + o.bound_mode);
    const double interval = parse_emit(o.emit);

    auto det = surge::make_detector(*algo, q, *mode);
    surge::EventScheduler sched(q);
    surge::StreamReader reader(in);
    const std::string name(surge::to_string(*algo));

    surge::ResultEmitter emitter(out, name, interval);
    auto process = [&](const std::vector<surge::Event>& events) {
        for (const auto& e : events) emitter.push(det->on_event(e));
    };

    std::vector<surge::SpatialObject> group;
    auto flush = [&] {
        if (group.empty()) return;
        for (const auto& obj : group) sched.admit(obj);
        process(sched.advance(group.front().t_c));
        group.clear();
    };

    auto idle_since = std::chrono::steady_clock::now();
    while (true) {
        auto obj = reader.next();
        if (obj) {
            idle_since = std::chrono::steady_clock::now();
            if (!group.empty() && obj->t_c != group.front().t_c) flush();
            group.push_back(*obj);
            continue;
        }
        flush();
        if (!o.follow) break;
        if (o.idle_exit > 0.0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - idle_since).count() >= o.idle_exit)
            break;
        out.flush();
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
        reader.resume();
    }
    if (o.drain) process(sched.drain());
    emitter.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous bursty-region detection over a weighted spatial stream"};
    Options o;
    app.add_option("--algo", o.algo, "ccs|gaps|mgaps|kccs|kgaps|kmgaps|oracle|naive (comma list with --bench)");
    app.add_option("--width", o.width, "Region width b");
    app.add_option("--height", o.height, "Region height a");
    app.add_option("--window", o.window, "Window length |W| in seconds");
    app.add_option("--alpha", o.alpha, "Burstiness weight in [0,1)");
    app.add_option("--k", o.k, "Number of regions for the top-k algorithms");
    app.add_option("--area", o.area, "Preferred area x0,y0,x1,y1");
    app.add_option("--emit", o.emit, "per-event or interval:<seconds>");
    app.add_option("--bound-mode", o.bound_mode, "both|static|none (exact algorithms)");
    app.add_option("--gen", o.gen, "Generate a stream from a JSON config (file, inline, or 'default')");
    app.add_flag("--bench", o.bench, "Benchmark the algorithms on the input stream");
    app.add_option("--seed", o.seed, "Override the generator seed");
    app.add_option("--n", o.n, "Override the generated object count");
    app.add_option("--input,-i", o.input, "Input stream (t,x,y,w or JSON lines); '-' for stdin");
    app.add_option("--output,-o", o.output, "Output file; '-' for stdout");
    app.add_flag("--follow", o.follow, "Keep reading as the input file grows");
    app.add_option("--idle-exit", o.idle_exit, "With --follow, stop after this many idle seconds");
    app.add_flag("--drain", o.drain, "Process the remaining grown/expired events at end of input");
    app.add_option("--warmup", o.warmup, "Events excluded from bench statistics");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        std::ofstream fout;
        std::ostream* out = &std::cout;
        if (o.output != "-") {
            fout.open(o.output);
            if (!fout) throw InputError("cannot write " + o.output);
            out = &fout;
        }
        if (!o.gen.empty()) return run_gen(o, *out);

        std::ifstream fin;
        std::istream* in = &std::cin;
        if (o.input != "-") {
            fin.open(o.input);
            if (!fin) throw InputError("cannot open " + o.input);
            in = &fin;
        }
        if (o.bench) return run_bench(o, *in, *out);
        return run_replay(o, *in, *out);
    } catch (const surge::GuardExceeded& e) {
        std::cerr << "surge: " << e.what() << '\n';
        return kExitGuard;
    } catch (const surge::ParseError& e) {
        std::cerr << "surge: parse error at " << e.what() << '\n';
        return kExitInput;
    } catch (const surge::StreamOrderError& e) {
        std::cerr << "surge: stream out of order: " << e.what() << '\n';
        return kExitInput;
    } catch (const InputError& e) {
        std::cerr << "surge: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "surge: invalid input: " << e.what() << '\n';
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "surge: bad JSON: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "surge: " << e.what() << '\n';
        return 1;
    }
}
