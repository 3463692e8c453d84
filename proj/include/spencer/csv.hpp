#pragma once

// RFC-4180 CSV writers for meshes, δ-matrices, operators and spectra.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spencer/error.hpp"
#include "spencer/geometry.hpp"
#include "spencer/lie_core.hpp"
#include "spencer/operator_matrix.hpp"

namespace spencer::csv {

[[nodiscard]] inline std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

[[nodiscard]] inline std::string number(double v) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) os_ << ',';
            os_ << quote(fields[i]);
        }
        os_ << "\r\n";
    }

private:
    std::ostream& os_;
};

inline std::ofstream open(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::input, "cannot open '" + path.string() + "' for writing");
    return out;
}

/// Columns t, x, y, h.
inline void write_mesh(std::ostream& os, const MeshCircle& mesh) {
    Writer w(os);
    w.row({"t", "x", "y", "h"});
    for (int i = 0; i < mesh.size(); ++i) {
        w.row({number(mesh.t_values[i]), number(mesh.nodes[i].x()), number(mesh.nodes[i].y()),
               number(mesh.arc_weights[i])});
    }
}

/// Rows are output multi-indices, columns input multi-indices.
inline void write_delta_matrix(std::ostream& os, const Eigen::MatrixXd& m, int degree, int dim = 3) {
    const SymBasis in(degree, dim);
    const SymBasis out(degree + 1, dim);
    Writer w(os);
    std::vector<std::string> header{"out\\in"};
    for (std::size_t j = 0; j < in.size(); ++j) header.push_back(multi_index_label(in[j]));
    w.row(header);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::vector<std::string> fields{multi_index_label(out[i])};
        for (std::size_t j = 0; j < in.size(); ++j)
            fields.push_back(number(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        w.row(fields);
    }
}

/// Dense row-major dump with c0..c{n-1} header.
inline void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    Writer w(os);
    std::vector<std::string> header;
    for (Eigen::Index j = 0; j < m.cols(); ++j) header.push_back("c" + std::to_string(j));
    w.row(header);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<std::string> fields;
        fields.reserve(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j) fields.push_back(number(m(i, j)));
        w.row(fields);
    }
}

/// Columns index, eigenvalue.
inline void write_eigenvalues(std::ostream& os, const Eigen::VectorXd& eig) {
    Writer w(os);
    w.row({"index", "eigenvalue"});
    for (Eigen::Index i = 0; i < eig.size(); ++i) w.row({std::to_string(i), number(eig[i])});
}

}  // namespace spencer::csv
