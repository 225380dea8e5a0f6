#include "sgfield/io.hpp"

#include <charconv>
#include <fstream>

namespace sgfield {

std::string library_version() { return SGFIELD_VERSION; }

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

void write_vertices_csv(std::ostream& out, const GasketMesh& mesh) {
  out << "vertex_id,x,y,is_boundary\n";
  for (Index v = 0; v < mesh.vertex_count(); ++v)
    out << v << ',' << format_double(mesh.vertex(v).x()) << ',' << format_double(mesh.vertex(v).y()) << ','
        << (mesh.is_boundary(v) ? 1 : 0) << '\n';
}

void write_cells_csv(std::ostream& out, const GasketMesh& mesh) {
  out << "cell_address,v0,v1,v2\n";
  for (const Cell& c : mesh.cells())
    out << c.address.to_string() << ',' << c.vertices[0] << ',' << c.vertices[1] << ',' << c.vertices[2] << '\n';
}

void write_eigenvalues_csv(std::ostream& out, const Spectrum& spec) {
  out << "j,lambda_j\n";
  for (Index j = 0; j < spec.size(); ++j) out << j + 1 << ',' << format_double(spec.eigenvalues(j)) << '\n';
}

void write_eigenvectors_csv(std::ostream& out, const Spectrum& spec) {
  out << "vertex_id";
  for (Index j = 0; j < spec.size(); ++j) out << ",phi_" << j + 1;
  out << '\n';
  for (Index v = 0; v < spec.vertex_count(); ++v) {
    out << v;
    for (Index j = 0; j < spec.size(); ++j) out << ',' << format_double(spec.eigenvectors(v, j));
    out << '\n';
  }
}

void write_field_csv(std::ostream& out, const GasketMesh& mesh, const std::vector<FieldSample>& samples) {
  out << "replicate_id,vertex_id,x,y,value\n";
  for (std::size_t r = 0; r < samples.size(); ++r)
    for (Index v = 0; v < mesh.vertex_count(); ++v)
      out << r << ',' << v << ',' << format_double(mesh.vertex(v).x()) << ',' << format_double(mesh.vertex(v).y())
          << ',' << format_double(samples[r].values(v)) << '\n';
}

nlohmann::json to_json(const FieldMeta& meta) {
  return {{"s", meta.s},
          {"alpha", meta.alpha},
          {"bc", to_string(meta.bc)},
          {"level", meta.level},
          {"n_terms", meta.n_terms},
          {"jmax", meta.truncation},
          {"seed", meta.seed},
          {"divergent_regime", meta.divergent_regime},
          {"snap_scale", meta.snap_scale},
          {"tail_bound", meta.tail_bound},
          {"tail_variance", meta.tail_variance},
          {"construction", meta.construction}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot write " + path.string());
  out << text;
  if (!out) throw ContractError("failed writing " + path.string());
}

}  // namespace sgfield
