#ifndef SGFIELD_IO_HPP_
#define SGFIELD_IO_HPP_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgfield/fields.hpp"
#include "sgfield/geometry.hpp"
#include "sgfield/spectral.hpp"

namespace sgfield {

std::string library_version();

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// vertex_id,x,y,is_boundary
void write_vertices_csv(std::ostream& out, const GasketMesh& mesh);
/// cell_address,v0,v1,v2
void write_cells_csv(std::ostream& out, const GasketMesh& mesh);
/// j,lambda_j (j is 1-based)
void write_eigenvalues_csv(std::ostream& out, const Spectrum& spec);
/// vertex_id,phi_1,...,phi_J
void write_eigenvectors_csv(std::ostream& out, const Spectrum& spec);
/// replicate_id,vertex_id,x,y,value
void write_field_csv(std::ostream& out, const GasketMesh& mesh, const std::vector<FieldSample>& samples);

nlohmann::json to_json(const FieldMeta& meta);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sgfield

#endif  // SGFIELD_IO_HPP_
