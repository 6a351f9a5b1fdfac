// io.hpp — persistence: JSON/CSV/SVG writers, config hashing, number formatting.
//
// Determinism contract: every float is printed with "%.17g" (round-trip exact),
// orderings are fixed, and each run's manifest embeds the FNV-1a hash of the
// canonical config serialization together with the seed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hbargeo/cell_pde.hpp"
#include "hbargeo/geometry.hpp"
#include "hbargeo/metric.hpp"
#include "hbargeo/orbits.hpp"
#include "hbargeo/potential.hpp"

namespace hbargeo {

// "%.17g" formatting (round-trip exact for doubles).
std::string fmt17(double v);

// FNV-1a 64-bit over a byte string; hex string form.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

// --- potentials ---------------------------------------------------------------

// {"terms":[{"amp":..,"k":[k1,k2],"phase":..}],"template":"...","offset":..}
std::string potential_to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const std::string& text);  // ConfigError on malformed input
PotentialSpec potential_from_json_file(const std::string& path);

// --- support tables -------------------------------------------------------------

// {"resolution":..,"window":..,"eps_grid":..,"entries":[{"w":[m,n],"sigma":..}]}
std::string support_table_to_json(const SupportTable& table, std::uint64_t config_hash);
SupportTable support_table_from_json(const std::string& text);

// --- grids / orbits / polygons ---------------------------------------------------

// CSV header "p1,p2,hbar,residual", row-major (p1 outer), 17 significant digits.
void write_hbar_csv(const std::string& path, const HbarGrid& grid);
// JSON sidecar with solver parameters, config hash, and seed.
void write_hbar_sidecar(const std::string& path, const HbarGrid& grid,
                        std::uint64_t config_hash, std::uint64_t seed);

// CSV header "t,x1,x2,v1,v2,energy".
void write_orbit_csv(const std::string& path, const Orbit& orbit, const PotentialSpec& spec);

std::string homoclinic_to_json(const HomoclinicRecord& rec, std::uint64_t config_hash);

std::string polygon_to_json(const ConvexPolygon& poly,
                            const std::vector<UnimodularReport>& vertex_checks,
                            std::uint64_t config_hash);

// --- SVG --------------------------------------------------------------------------

// F0 polygon(s): refinement sequence in light strokes, final polygon with
// stable edges highlighted, normals labeled, vertex checks annotated.
void write_f0_svg(const std::string& path, const std::vector<ConvexPolygon>& seq,
                  const std::vector<UnimodularReport>& vertex_checks, std::uint64_t config_hash);

// Level lines of Hbar (marching squares) including the flat-set outline.
void write_hbar_svg(const std::string& path, const HbarGrid& grid,
                    const std::vector<double>& levels, std::uint64_t config_hash);

// --- misc --------------------------------------------------------------------------

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);  // ConfigError when missing

// manifest.json: {"config_hash":"..","seed":..,"files":[..]}
void write_manifest(const std::string& dir, std::uint64_t config_hash, std::uint64_t seed,
                    const std::vector<std::string>& files);

}  // namespace hbargeo
