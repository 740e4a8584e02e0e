#include "surge/stream_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "surge/window.hpp"

namespace surge {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(std::string_view field, std::size_t line_no, const char* name) {
    const std::string buf(trim(field));
    if (buf.empty()) throw ParseError(line_no, std::string("empty field ") + name);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || errno == ERANGE)
        throw ParseError(line_no, std::string("bad number for ") + name + ": '" + buf + "'");
    return v;
}

void check(const StreamRecord& r, std::size_t line_no) {
    if (!std::isfinite(r.t) || !std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.w))
        throw ParseError(line_no, "non-finite value");
    if (r.w < 0.0) throw ParseError(line_no, "negative weight");
}

std::string fmt(const char* spec, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace

std::optional<StreamRecord> parse_record(std::string_view line, std::size_t line_no) {
    line = trim(line);
    if (line.empty() || line.front() == '#') return std::nullopt;

    StreamRecord r;
    if (line.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, std::string("bad JSON: ") + e.what());
        }
        for (const char* key : {"t", "x", "y", "w"}) {
            if (!j.contains(key) || !j[key].is_number())
                throw ParseError(line_no, std::string("missing numeric key '") + key + "'");
        }
        r = {j["t"].get<double>(), j["x"].get<double>(), j["y"].get<double>(), j["w"].get<double>()};
    } else {
        std::vector<std::string_view> f;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            f.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (f.size() == 4 && trim(f[0]) == "t" && trim(f[1]) == "x") return std::nullopt;
        if (f.size() != 4)
            throw ParseError(line_no, "expected 4 fields t,x,y,w, got " + std::to_string(f.size()));
        r = {parse_number(f[0], line_no, "t"), parse_number(f[1], line_no, "x"),
             parse_number(f[2], line_no, "y"), parse_number(f[3], line_no, "w")};
    }
    check(r, line_no);
    return r;
}

std::optional<SpatialObject> StreamReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        const auto r = parse_record(line, line_);
        if (!r) continue;
        if (last_t_ && r->t < *last_t_)
            throw StreamOrderError("line " + std::to_string(line_) + ": timestamp " +
                                   fmt("%.17g", r->t) + " precedes " + fmt("%.17g", *last_t_));
        last_t_ = r->t;
        return SpatialObject{next_id_++, r->w, r->x, r->y, r->t};
    }
    return std::nullopt;
}

void StreamReader::resume() { in_.clear(); }

std::vector<SpatialObject> read_stream(std::istream& in) {
    StreamReader reader(in);
    std::vector<SpatialObject> out;
    while (auto o = reader.next()) out.push_back(*o);
    return out;
}

void write_csv(std::ostream& out, std::span<const SpatialObject> objects) {
    for (const auto& o : objects)
        out << fmt("%.17g", o.t_c) << ',' << fmt("%.17g", o.x) << ',' << fmt("%.17g", o.y) << ','
            << fmt("%.17g", o.w) << '\n';
}

std::string format_result(const TopKResult& r, std::string_view algo) {
    std::string s = "{\"t\":" + fmt("%.17g", r.t) + ",\"algo\":" + nlohmann::json(std::string(algo)).dump() +
                    ",\"regions\":[";
    for (std::size_t i = 0; i < r.regions.size(); ++i) {
        const auto& b = r.regions[i];
        if (i) s += ',';
        s += "{\"x_min\":" + fmt("%.17g", b.region.x_min) + ",\"y_min\":" + fmt("%.17g", b.region.y_min) +
             ",\"x_max\":" + fmt("%.17g", b.region.x_max) + ",\"y_max\":" + fmt("%.17g", b.region.y_max) +
             ",\"score\":" + fmt("%.12g", b.score) + ",\"rank\":" + std::to_string(b.rank);
        if (!b.placed) s += ",\"placed\":false";
        s += '}';
    }
    s += "]}";
    return s;
}

void emit_result(const TopKResult& r, std::string_view algo, std::ostream& sink) {
    sink << format_result(r, algo) << '\n';
    if (!sink) throw std::runtime_error("failed to write result");
}

void ResultEmitter::push(TopKResult r) {
    if (interval_ <= 0.0) {
        emit_result(r, algo_, sink_);
        ++written_;
        return;
    }
    const double tick = (std::floor(r.t / interval_) + 1.0) * interval_;
    if (!next_tick_) next_tick_ = tick;
    if (r.t >= *next_tick_) {
        if (last_) {
            emit_result(*last_, algo_, sink_);
            ++written_;
        }
        next_tick_ = tick;
    }
    last_ = std::move(r);
}

void ResultEmitter::finish() {
    if (interval_ > 0.0 && last_) {
        emit_result(*last_, algo_, sink_);
        ++written_;
        last_.reset();
    }
}

TopKResult parse_result(std::string_view line, std::string* algo) {
    const auto j = nlohmann::json::parse(line);
    TopKResult r;
    r.t = j.at("t").get<double>();
    if (algo) *algo = j.at("algo").get<std::string>();
    for (const auto& e : j.at("regions")) {
        BurstResult b;
        b.region = {e.at("x_min").get<double>(), e.at("y_min").get<double>(), e.at("x_max").get<double>(),
                    e.at("y_max").get<double>()};
        b.point = {b.region.x_max, b.region.y_max};
        b.score = e.at("score").get<double>();
        b.rank = e.at("rank").get<int>();
        b.placed = e.value("placed", true);
        b.t = r.t;
        r.regions.push_back(b);
    }
    return r;
}

}  // namespace surge
