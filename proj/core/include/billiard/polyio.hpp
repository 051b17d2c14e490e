#pragma once

#include <string>

#include "billiard/polygon.hpp"

namespace billiard {

/// Parses a scalar token: integer ("3"), fraction ("7/2", exact in both
/// backends), or decimal ("0.25", exact dyadic-free decimal in the rational
/// backend). Throws GeometryError on malformed input.
template <class S>
S parse_scalar(const std::string& token);

/// Polygon text format: one vertex per line as "x y"; '#' starts a comment;
/// blank lines are skipped. Vertices may be listed in either orientation.
template <class S>
Polygon<S> parse_polygon_text(const std::string& text, long certify_max_den = 200);

/// Loads a polygon file; GeometryError on unreadable files or bad content.
template <class S>
Polygon<S> load_polygon(const std::string& path, long certify_max_den = 200);

/// Serializes a scalar: exact "p/q" (or integer) in the rational backend,
/// shortest round-trip decimal in the float backend.
template <class S>
std::string format_scalar(const S& value);

template <class S>
std::string format_polygon(const Polygon<S>& p);

}  // namespace billiard
