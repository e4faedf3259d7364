#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sz/disc.hpp"
#include "sz/envelope.hpp"
#include "sz/glue.hpp"
#include "sz/hull.hpp"

namespace sz::io {

// Raised on malformed input; what() begins with the offending field path
// (e.g. "geometry.primitives[2].ball.radius: must be positive").
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- Set geometry files: {"schema":"sz/1","tolerance":t,"primitives":[...]}
// with each primitive {"ball":{"center":[[re,im]...],"radius":r}} or
// {"box":{"lo":[[re,im]...],"hi":[[re,im]...]}}.
SetGeometry read_geometry(const std::string& path);
SetGeometry geometry_from_string(const std::string& text,
                                 const std::string& origin = "geometry");
std::string geometry_to_string(const SetGeometry& X);
void write_geometry(const SetGeometry& X, const std::string& path);

// --- Factored disc files: {"schema":"sz/1","dimension":n,"components":[...]}
// with each component {"blaschke":[[re,im,mult]...],
// "outer":{"rational":{"num":[[re,im]...],"den":[[re,im]...]},"grid":[...]},
// "sing_num":[[angle,mass]...],"sing_den":[[angle,mass]...]}; every
// component field is optional and defaults to the trivial factor.
FactoredDisc read_disc(const std::string& path);
FactoredDisc disc_from_string(const std::string& text,
                              const std::string& origin = "disc");
std::string disc_to_string(const FactoredDisc& d);
void write_disc(const FactoredDisc& d, const std::string& path);

// --- Gluing spec files: {"schema":"sz/1","base":[poly...],
// "arcs":[[start,end]...],"anchors":[angle...],"attached":[[poly...]...],
// "m":k} where poly = ascending coefficient list [[re,im]...].
GluingSpec read_gluing(const std::string& path);
GluingSpec gluing_from_string(const std::string& text,
                              const std::string& origin = "gluing");
std::string gluing_to_string(const GluingSpec& g);
void write_gluing(const GluingSpec& g, const std::string& path);

// --- Result artifacts (write-only).
std::string envelope_to_string(const EnvelopeResult& r);
void write_envelope(const EnvelopeResult& r, const std::string& path);

std::string verdict_to_string(const HullVerdict& v);
void write_verdict(const HullVerdict& v, const std::string& path);

// CSV with header re,im,value,family; one row per grid point, %.17g floats.
std::string grid_csv(const std::vector<GridRow>& rows);
void write_grid_csv(const std::vector<GridRow>& rows, const std::string& path);

}  // namespace sz::io
