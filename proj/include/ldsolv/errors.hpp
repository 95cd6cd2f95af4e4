#pragma once

#include <stdexcept>
#include <string>

namespace ldsolv {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// numeric core
struct NonSquare : Error {
    NonSquare() : Error("matrix is not square") {}
};
struct SizeExceeded : Error {
    explicit SizeExceeded(int n, int cap)
        : Error("matrix size " + std::to_string(n) + " exceeds cap " + std::to_string(cap)) {}
};
struct ConvergenceFailure : Error {
    ConvergenceFailure() : Error("eigenvalue iteration failed to converge") {}
};
struct SingularMatrix : Error {
    SingularMatrix() : Error("matrix is numerically singular") {}
};

// ingestion
struct ParseError : Error {
    std::string context;  // where in the document (JSON path or expression)
    long position = -1;   // offset within the expression, -1 if n/a
    ParseError(const std::string& msg, std::string ctx = {}, long pos = -1)
        : Error(ctx.empty() ? msg : msg + " (at " + ctx +
                (pos >= 0 ? ", position " + std::to_string(pos) : "") + ")"),
          context(std::move(ctx)), position(pos) {}
};
struct UnboundParameter : Error {
    std::string name;
    explicit UnboundParameter(std::string n)
        : Error("unbound parameter '" + n + "'"), name(std::move(n)) {}
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};
struct DuplicatePoint : Error {
    explicit DuplicatePoint(const std::string& where) : Error("duplicate singular point at " + where) {}
};

// system model
struct InfinityAlreadySingular : Error {
    InfinityAlreadySingular() : Error("system has an explicit singular point at infinity") {}
};
struct NotInfinity : Error {
    NotInfinity() : Error("point is not at infinity") {}
};
struct NotFuchsian : Error {
    NotFuchsian() : Error("point is not Fuchsian (Poincare rank > 0)") {}
};

// splitting engine
struct ResonantPoint : Error {
    ResonantPoint() : Error("leading eigenvalues are not pairwise distinct") {}
};
struct DivergenceGuard : Error {
    explicit DivergenceGuard(int k)
        : Error("gauge series coefficient T^(" + std::to_string(k) + ") exceeded the norm cap") {}
};

// lie solver
struct SizeMismatch : Error {
    SizeMismatch() : Error("matrices do not share one square size") {}
};
struct NotClosed : Error {
    NotClosed() : Error("basis is not closed under the bracket") {}
};

// classifier
struct ResonantPointPresent : Error {
    std::string location;
    explicit ResonantPointPresent(std::string loc)
        : Error("resonant irregular point at " + loc + "; analysis refuses it"),
          location(std::move(loc)) {}
};
struct DimensionOne : Error {
    DimensionOne() : Error("scalar system: smallness threshold 1/n(p-1) is undefined") {}
};
struct RankNotOne : Error {
    RankNotOne() : Error("every point must have Poincare rank exactly 1") {}
};

// cli
struct UnknownFixture : Error {
    explicit UnknownFixture(const std::string& name) : Error("unknown fixture '" + name + "'") {}
};

}  // namespace ldsolv
