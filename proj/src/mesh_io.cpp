#include "aniso_rt/mesh_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace aniso_rt {

Simplex Mesh::element_simplex(int e) const {
    std::vector<VecD> verts;
    for (int i = 0; i <= dim; ++i)
        verts.push_back(nodes[static_cast<size_t>(elements[static_cast<size_t>(e)][static_cast<size_t>(i)])]);
    return Simplex(dim, std::move(verts));
}

bool Mesh::is_conforming() const {
    std::map<std::vector<int>, int> count;
    for (const auto& el : elements) {
        for (int skip = 0; skip <= dim; ++skip) {
            std::vector<int> face;
            for (int i = 0; i <= dim; ++i)
                if (i != skip) face.push_back(el[static_cast<size_t>(i)]);
            std::sort(face.begin(), face.end());
            ++count[face];
        }
    }
    for (const auto& [face, c] : count)
        if (c > 2) return false;
    return true;
}

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;

    explicit LineReader(const std::string& text) : in(text) {}

    // Next non-empty line with comments stripped; false at EOF.
    bool next(std::string& out) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            size_t begin = raw.find_first_not_of(" \t\r\n");
            if (begin == std::string::npos) continue;
            size_t end = raw.find_last_not_of(" \t\r\n");
            out = raw.substr(begin, end - begin + 1);
            return true;
        }
        return false;
    }
};

} // namespace

Mesh parse_mesh(const std::string& text) {
    LineReader reader(text);
    Mesh m;
    std::string line;

    auto expect_line = [&](const char* what) {
        if (!reader.next(line)) throw ParseError(reader.line_no, std::string("expected ") + what);
    };

    expect_line("'dim d'");
    {
        std::istringstream ss(line);
        std::string kw;
        if (!(ss >> kw >> m.dim) || kw != "dim" || (m.dim != 2 && m.dim != 3))
            throw ParseError(reader.line_no, "expected 'dim 2' or 'dim 3'");
    }

    expect_line("'nodes n'");
    int nnodes = 0;
    {
        std::istringstream ss(line);
        std::string kw;
        if (!(ss >> kw >> nnodes) || kw != "nodes" || nnodes < 0)
            throw ParseError(reader.line_no, "expected 'nodes <count>'");
    }
    for (int i = 0; i < nnodes; ++i) {
        expect_line("node coordinates");
        std::istringstream ss(line);
        VecD p = VecD::zero(m.dim);
        for (int c = 0; c < m.dim; ++c)
            if (!(ss >> p[c])) throw ParseError(reader.line_no, "bad node coordinates");
        double extra;
        if (ss >> extra) throw ParseError(reader.line_no, "too many coordinates");
        m.nodes.push_back(p);
    }

    expect_line("'elements m'");
    int nel = 0;
    {
        std::istringstream ss(line);
        std::string kw;
        if (!(ss >> kw >> nel) || kw != "elements" || nel < 0)
            throw ParseError(reader.line_no, "expected 'elements <count>'");
    }
    for (int e = 0; e < nel; ++e) {
        expect_line("element indices");
        std::istringstream ss(line);
        std::array<int, 4> idx{-1, -1, -1, -1};
        for (int c = 0; c <= m.dim; ++c)
            if (!(ss >> idx[static_cast<size_t>(c)]))
                throw ParseError(reader.line_no, "bad element indices");
        int extra;
        if (ss >> extra) throw ParseError(reader.line_no, "too many indices");
        for (int c = 0; c <= m.dim; ++c)
            if (idx[static_cast<size_t>(c)] < 0 || idx[static_cast<size_t>(c)] >= nnodes)
                throw IndexOutOfRange("element " + std::to_string(e) + " references node " +
                                      std::to_string(idx[static_cast<size_t>(c)]) + " of " +
                                      std::to_string(nnodes));
        m.elements.push_back(idx);
    }

    for (int e = 0; e < m.num_elements(); ++e) {
        try {
            m.element_simplex(e).require_nondegenerate();
        } catch (const DegenerateSimplex&) {
            throw DegenerateElement("element " + std::to_string(e) + " is degenerate");
        }
    }
    return m;
}

std::string write_mesh(const Mesh& m) {
    std::string out;
    char buf[64];
    out += "dim " + std::to_string(m.dim) + "\n";
    out += "nodes " + std::to_string(m.nodes.size()) + "\n";
    for (const auto& p : m.nodes) {
        for (int c = 0; c < m.dim; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", p[c]);
            out += buf;
            out += (c + 1 < m.dim) ? " " : "\n";
        }
    }
    out += "elements " + std::to_string(m.elements.size()) + "\n";
    for (const auto& el : m.elements) {
        for (int c = 0; c <= m.dim; ++c) {
            out += std::to_string(el[static_cast<size_t>(c)]);
            out += (c < m.dim) ? " " : "\n";
        }
    }
    return out;
}

namespace {

Mesh unit_square_mesh() {
    Mesh m;
    m.dim = 2;
    m.nodes = {VecD(0, 0), VecD(1, 0), VecD(1, 1), VecD(0, 1)};
    m.elements = {{0, 1, 2, -1}, {0, 2, 3, -1}};
    return m;
}

Mesh refine_uniform(const Mesh& m) {
    Mesh out;
    out.dim = m.dim;
    out.nodes = m.nodes;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        VecD p = 0.5 * (out.nodes[static_cast<size_t>(a)] + out.nodes[static_cast<size_t>(b)]);
        out.nodes.push_back(p);
        int idx = static_cast<int>(out.nodes.size()) - 1;
        midpoint.emplace(key, idx);
        return idx;
    };
    for (const auto& el : m.elements) {
        int a = el[0], b = el[1], c = el[2];
        int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        out.elements.push_back({a, ab, ca, -1});
        out.elements.push_back({ab, b, bc, -1});
        out.elements.push_back({ca, bc, c, -1});
        out.elements.push_back({ab, bc, ca, -1});
    }
    return out;
}

Mesh single_element(int dim, std::vector<VecD> verts) {
    Mesh m;
    m.dim = dim;
    m.nodes = std::move(verts);
    m.elements.push_back(dim == 2 ? std::array<int, 4>{0, 1, 2, -1}
                                  : std::array<int, 4>{0, 1, 2, 3});
    return m;
}

} // namespace

Mesh generate_family(const FamilySpec& spec, int level) {
    if (level < 0) throw BadSpec("negative level");
    const double h0 = spec.base_scale;

    if (spec.family == "shape_regular") {
        Mesh m = unit_square_mesh();
        // base_scale < 1 starts the dyadic sequence at a finer mesh
        int extra = (h0 < 1.0) ? static_cast<int>(std::lround(std::log2(1.0 / h0))) : 0;
        for (int l = 0; l < level + extra; ++l) m = refine_uniform(m);
        return m;
    }
    if (spec.family == "needle_2d") {
        double a1 = h0 * std::pow(2.0, -level);
        double a2 = std::pow(a1, spec.gamma);
        return single_element(2, {VecD(0, 0), VecD(a1, 0), VecD(0, a2)});
    }
    if (spec.family == "cap_2d") {
        double w = h0;
        double eps = spec.eps0 * std::pow(spec.eps_ratio, level);
        return single_element(2, {VecD(0, 0), VecD(w, 0), VecD(w / 2.0, w * eps)});
    }
    if (spec.family == "cap_graded_2d") {
        double h = h0 * std::pow(2.0, -level);
        return single_element(2, {VecD(0, 0), VecD(h, 0), VecD(h / 2.0, std::pow(h, spec.gamma))});
    }
    if (spec.family == "tet_type_i") {
        double a1 = h0 * std::pow(2.0, -level);
        double a2 = 0.25 * std::pow(a1, spec.gamma); // keep a2 < a3 at level 0
        double a3 = 0.8 * a1;
        double s1 = 0.3, t1 = std::sqrt(1.0 - s1 * s1);
        double s21 = 0.2, s22 = spec.s22;
        double t2 = std::sqrt(1.0 - s21 * s21 - s22 * s22);
        return single_element(3, {VecD(0, 0, 0), VecD(a1, 0, 0),
                                  VecD(a2 * s1, a2 * t1, 0),
                                  VecD(a3 * s21, a3 * s22, a3 * t2)});
    }
    if (spec.family == "tet_type_ii") {
        double a1 = h0 * std::pow(2.0, -level);
        double a2 = 0.25 * std::pow(a1, spec.gamma);
        double a3 = 0.8 * a1;
        double s1 = 0.3, t1 = std::sqrt(1.0 - s1 * s1);
        double s21 = 0.55, s22 = spec.s22;
        double t2 = std::sqrt(1.0 - s21 * s21 - s22 * s22);
        return single_element(3, {VecD(0, 0, 0), VecD(a1, 0, 0),
                                  VecD(a1 - a2 * s1, a2 * t1, 0),
                                  VecD(a3 * s21, a3 * s22, a3 * t2)});
    }
    if (spec.family == "sliver") {
        double a = h0 / 2.0;
        double eps = spec.eps0 * std::pow(spec.eps_ratio, level);
        return single_element(3, {VecD(a, 0, 0), VecD(-a, 0, 0), VecD(0, a, eps * a),
                                  VecD(0, -a, eps * a)});
    }
    throw BadSpec("unknown family '" + spec.family + "'");
}

} // namespace aniso_rt
