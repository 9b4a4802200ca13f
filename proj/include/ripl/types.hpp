#ifndef RIPL_TYPES_HPP
#define RIPL_TYPES_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ripl/ast.hpp"
#include "ripl/check.hpp"

namespace ripl {

struct ImageType {
    long long width = 0;  // M
    long long height = 0; // N
    bool operator==(const ImageType&) const = default;
};

struct VectorType {
    long long length = 0; // s, elements are Int
    bool operator==(const VectorType&) const = default;
};

struct ScalarType {
    bool operator==(const ScalarType&) const = default;
};

using ValueType = std::variant<ImageType, VectorType, ScalarType>;

inline std::string type_text(const ValueType& t) {
    if (auto* im = std::get_if<ImageType>(&t))
        return "Im(" + std::to_string(im->width) + "," + std::to_string(im->height) + ")";
    if (auto* v = std::get_if<VectorType>(&t))
        return "[Int]_" + std::to_string(v->length);
    return "Int";
}

// Type of a value inside a kernel: a scalar or a fixed-length vector.
struct KType {
    bool is_vector = false;
    long long length = 0;
    bool operator==(const KType&) const = default;

    static KType scalar() { return KType{false, 0}; }
    static KType vector(long long n) { return KType{true, n}; }
};

inline std::string ktype_text(const KType& t) {
    if (!t.is_vector) return "scalar";
    return "vector of " + std::to_string(t.length);
}

struct TypedBinding {
    std::string name;
    ResolvedCall call;             // kernel pointer aliases program.bindings
    ValueType result;
    std::vector<KType> kernel_params;
    KType kernel_result;
    SourcePos pos;
};

// A validated program with every binding annotated by its concrete size.
struct TypedProgram {
    Program program;
    std::vector<TypedBinding> bindings;
    std::map<std::string, ValueType> type_of; // inputs and bindings
};

} // namespace ripl

#endif
