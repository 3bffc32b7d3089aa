#include "lenodal/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>

#include <nlohmann/json.hpp>

namespace lenodal {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field format is little-endian; big-endian hosts unsupported");

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw CorruptFieldFile("unexpected end of field file");
    return v;
}

nlohmann::json meta_to_json(const FieldMeta& m) {
    nlohmann::json j;
    if (m.exponents) {
        const Exponents& e = *m.exponents;
        j["exponents"] = {{"N", e.N}, {"p", e.p}, {"q", e.q}, {"qp", e.qp}, {"pp", e.pp}};
        if (e.is_exact()) {
            j["exponents"]["p_exact"] = {e.p_exact->numerator(), e.p_exact->denominator()};
            j["exponents"]["q_exact"] = {e.q_exact->numerator(), e.q_exact->denominator()};
        }
    }
    j["symmetry_tag"] = m.symmetry_tag;
    j["equivariant"] = m.equivariant;
    return j;
}

FieldMeta meta_from_json(const nlohmann::json& j) {
    FieldMeta m;
    if (j.contains("exponents")) {
        const auto& je = j["exponents"];
        if (je.contains("q_exact")) {
            m.exponents = hyperbola_from_q(
                je["N"].get<int>(),
                Rational(je["q_exact"][0].get<long long>(), je["q_exact"][1].get<long long>()));
        } else {
            m.exponents = hyperbola_from_q(je["N"].get<int>(), je["q"].get<double>());
        }
    }
    m.symmetry_tag = j.value("symmetry_tag", "");
    m.equivariant = j.value("equivariant", false);
    return m;
}

} // namespace

void save_field(const Field& f, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FieldIoError("cannot open " + path.string() + " for writing");
    os.write("LEFD", 4);
    put<std::uint32_t>(os, kFieldFormatVersion);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(f.grid->kind()));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(f.grid->dimension()));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(f.grid->block_count()));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(f.grid->axis_count()));
    for (const Axis& a : f.grid->axes()) {
        put<std::uint32_t>(os, a.n);
        put<double>(os, a.h);
    }
    put<double>(os, f.grid->extent());
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(f.values.size())));
    if (!os) throw FieldIoError("short write to " + path.string());
    os.close();

    std::ofstream js(path.string() + ".json");
    js << meta_to_json(f.meta).dump(2) << "\n";
}

Field load_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FieldIoError("cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "LEFD", 4) != 0)
        throw CorruptFieldFile("bad magic in " + path.string());
    const auto version = get<std::uint32_t>(is);
    if (version != kFieldFormatVersion)
        throw FieldVersionMismatch("field file version " + std::to_string(version) +
                                   " != " + std::to_string(kFieldFormatVersion));
    const auto kind = static_cast<GridKind>(get<std::uint8_t>(is));
    const int N = get<std::uint8_t>(is);
    const int j = get<std::uint8_t>(is);
    const int naxes = get<std::uint8_t>(is);
    std::vector<Axis> axes;
    for (int a = 0; a < naxes; ++a) {
        Axis ax;
        ax.n = get<std::uint32_t>(is);
        ax.h = get<double>(is);
        axes.push_back(ax);
    }
    const double extent = get<double>(is);
    if (axes.empty()) throw CorruptFieldFile("no axes in " + path.string());

    GridPtr grid = make_grid(kind, N, j, extent, static_cast<int>(axes[0].n));
    if (grid->axis_count() != naxes)
        throw CorruptFieldFile("axis count inconsistent with grid kind");
    for (int a = 0; a < naxes; ++a) {
        if (grid->axes()[static_cast<std::size_t>(a)].n != axes[static_cast<std::size_t>(a)].n ||
            std::abs(grid->axes()[static_cast<std::size_t>(a)].h - axes[static_cast<std::size_t>(a)].h) >
                1e-14 * axes[static_cast<std::size_t>(a)].h)
            throw CorruptFieldFile("axis descriptor mismatch in " + path.string());
    }

    Field f = make_field(grid);
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(sizeof(double) * grid->size()));
    if (!is || static_cast<std::size_t>(is.gcount()) != sizeof(double) * grid->size())
        throw CorruptFieldFile("truncated value block in " + path.string());

    std::ifstream js(path.string() + ".json");
    if (js) {
        nlohmann::json j2;
        js >> j2;
        f.meta = meta_from_json(j2);
    }
    return f;
}

void export_csv(const Field& f, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw FieldIoError("cannot open " + path.string() + " for writing");
    os << std::setprecision(17);
    const Grid& g = *f.grid;
    for (int a = 0; a < g.axis_count(); ++a) os << "x" << a << ",";
    os << "value\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (double c : g.node(i)) os << c << ",";
        os << f.values[static_cast<Eigen::Index>(i)] << "\n";
    }
}

} // namespace lenodal
