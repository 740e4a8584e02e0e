#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "surge/model.hpp"

namespace surge {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct StreamRecord {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
};

/// Parses `t,x,y,w` or a JSON object with keys t/x/y/w. Blank lines, `#`
/// comments and a `t,x,y,w` header yield nullopt.
std::optional<StreamRecord> parse_record(std::string_view line, std::size_t line_no);

/// Pulls objects from a line stream, numbering them from 0 in file order.
class StreamReader {
public:
    explicit StreamReader(std::istream& in) : in_(in) {}

    /// Next object, or nullopt at end of input. Throws ParseError or
    /// StreamOrderError.
    std::optional<SpatialObject> next();
    std::size_t line() const { return line_; }
    /// Clears the stream's EOF state so that a growing file can be read on.
    void resume();

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::uint64_t next_id_ = 0;
    std::optional<double> last_t_;
};

std::vector<SpatialObject> read_stream(std::istream& in);

/// Writes `t,x,y,w` lines with round-trip precision.
void write_csv(std::ostream& out, std::span<const SpatialObject> objects);

/// One JSON line per emission; scores carry 12 significant digits.
std::string format_result(const TopKResult& r, std::string_view algo);

/// Writes format_result plus a newline; throws std::runtime_error if the sink fails.
void emit_result(const TopKResult& r, std::string_view algo, std::ostream& sink);

/// Writes results either after every event (interval <= 0) or once per
/// interval tick: the last result before each tick boundary is written when
/// the first event at or past the boundary arrives, and finish() writes the
/// final pending one.
class ResultEmitter {
public:
    ResultEmitter(std::ostream& sink, std::string algo, double interval)
        : sink_(sink), algo_(std::move(algo)), interval_(interval) {}

    void push(TopKResult r);
    void finish();
    std::size_t written() const { return written_; }

private:
    std::ostream& sink_;
    std::string algo_;
    double interval_;
    std::optional<TopKResult> last_;
    std::optional<double> next_tick_;
    std::size_t written_ = 0;
};

/// Parses a line written by format_result.
TopKResult parse_result(std::string_view line, std::string* algo = nullptr);

}  // namespace surge
