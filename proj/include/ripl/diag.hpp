#ifndef RIPL_DIAG_HPP
#define RIPL_DIAG_HPP

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ripl {

struct SourcePos {
    int line = 0;
    int col = 0;
    bool operator==(const SourcePos&) const = default;
};

// One compile-time diagnostic. Rendered as "ERROR <code> <line>:<col> <message>".
struct Diag {
    std::string code;
    SourcePos pos;
    std::string message;
};

inline std::string format_diag(const Diag& d) {
    std::ostringstream os;
    os << "ERROR " << d.code << " " << d.pos.line << ":" << d.pos.col << " " << d.message;
    return os.str();
}

inline std::string format_diags(const std::vector<Diag>& ds) {
    std::string out;
    for (const auto& d : ds) {
        out += format_diag(d);
        out += '\n';
    }
    return out;
}

// Value-or-diagnostics carrier used by every compile stage.
template <typename T>
struct Result {
    std::optional<T> value;
    std::vector<Diag> diags;

    bool ok() const { return value.has_value() && diags.empty(); }
    T& operator*() { return *value; }
    const T& operator*() const { return *value; }
    T* operator->() { return &*value; }
    const T* operator->() const { return &*value; }

    static Result success(T v) {
        Result r;
        r.value = std::move(v);
        return r;
    }
    static Result failure(std::vector<Diag> ds) {
        Result r;
        r.diags = std::move(ds);
        return r;
    }
    static Result failure(Diag d) {
        Result r;
        r.diags.push_back(std::move(d));
        return r;
    }
};

// Run-time failure inside a kernel or the streaming simulator
// (E_DIVZERO, E_INDEX, E_INPUT_DIM, E_DEADLOCK, E_TICK_LIMIT).
class RuntimeError : public std::runtime_error {
public:
    RuntimeError(std::string code, SourcePos pos, const std::string& message,
                 std::string detail = {})
        : std::runtime_error("ERROR " + code + " " + std::to_string(pos.line) + ":" +
                             std::to_string(pos.col) + " " + message),
          code_(std::move(code)), pos_(pos), detail_(std::move(detail)) {}

    const std::string& code() const { return code_; }
    SourcePos pos() const { return pos_; }
    // Longer diagnosis text (deadlock snapshots and the like), may be empty.
    const std::string& detail() const { return detail_; }

private:
    std::string code_;
    SourcePos pos_;
    std::string detail_;
};

} // namespace ripl

#endif
