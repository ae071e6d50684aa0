#pragma once

// Text serialization. JSON documents carry a "format" tag and a "version"
// and always hold full-precision numbers; non-finite values are written as
// the strings "inf", "-inf" and "nan". CSV numbers are shortest round-trip
// decimals unless a digit count is requested. Layouts are described in
// docs/formats.md.

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "gldlmom/atlas.hpp"
#include "gldlmom/fitting.hpp"
#include "gldlmom/gld.hpp"
#include "gldlmom/lmoments.hpp"
#include "gldlmom/simbench.hpp"

namespace gldlmom::io {

inline constexpr int kFormatVersion = 1;

enum class Format { Csv, Json, Table };

/// "csv", "json" or "table"; throws ParseError otherwise.
Format parse_format(std::string_view text);

struct NumberFormat {
  int digits = -1;  // significant digits; -1 = shortest round-trip form
};

std::string number(double v, const NumberFormat& nf = {});

/// Strict decimal parse of the whole string (also "inf", "-inf", "nan").
/// Throws ParseError.
double parse_number(std::string_view text);

/// "a,b,c" -> {a, b, c}. Throws ParseError.
std::vector<double> parse_list(std::string_view text);

/// Whitespace- or comma-separated numbers; '#' starts a comment and a leading
/// all-text line is taken as a column header. Throws ParseError on anything else.
std::vector<double> read_numbers(std::istream& in);

std::string to_json(const GldParams& p);
std::string to_json(const LMomentSet& m);
std::string to_json(const SymmetricSolution& s);
std::string to_json(const FitResult& r);
std::string to_json(const std::vector<FitResult>& rs);
std::string to_json(const BoundaryPolygon& b);
std::string to_json(const ContourSet& c);
std::string to_json(const std::vector<CensusSolution>& cs);
std::string to_json(const SimReport& r);
std::string atlas_json(const LambdaGrid& g, const TauGrid& t);

/// Inverse of to_json for the types above. Throws ParseError on malformed
/// input or a document of another format.
template <class T>
T from_json(std::string_view text);

std::string to_csv(const GldParams& p, const NumberFormat& nf = {});
std::string to_csv(const LMomentSet& m, const NumberFormat& nf = {});
std::string to_csv(const SymmetricSolution& s, const NumberFormat& nf = {});
std::string to_csv(const std::vector<FitResult>& rs, const NumberFormat& nf = {});
std::string to_csv(const BoundaryPolygon& b, const NumberFormat& nf = {});
std::string to_csv(const ContourSet& c, const NumberFormat& nf = {});
std::string to_csv(const std::vector<CensusSolution>& cs, const NumberFormat& nf = {});
/// One row per valid node: region,lambda3,lambda4,tau3,tau4.
std::string atlas_csv(const LambdaGrid& g, const TauGrid& t, const NumberFormat& nf = {});

}  // namespace gldlmom::io
