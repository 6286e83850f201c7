#include "pentao/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pentao/instances.hpp"

namespace pentao {

nlohmann::json instance_to_json(const IsingInstance &inst) {
    nlohmann::json couplings = nlohmann::json::array();
    for (const auto &c : inst.couplings()) {
        couplings.push_back({c.i, c.j, c.w});
    }
    nlohmann::json fields = nlohmann::json::array();
    for (const auto &f : inst.fields()) {
        fields.push_back({f.i, f.w});
    }
    return {{"n", inst.n()}, {"couplings", couplings}, {"fields", fields}, {"label", inst.label()}};
}

IsingInstance instance_from_json(const nlohmann::json &j) {
    try {
        const int n = j.at("n").get<int>();
        std::vector<Coupling> couplings;
        for (const auto &c : j.at("couplings")) {
            if (!c.is_array() || c.size() != 3) {
                throw InputError("instance JSON: coupling entries must be [i, j, w]");
            }
            couplings.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<double>()});
        }
        std::vector<Field> fields;
        if (j.contains("fields")) {
            for (const auto &f : j.at("fields")) {
                if (!f.is_array() || f.size() != 2) {
                    throw InputError("instance JSON: field entries must be [i, w]");
                }
                fields.push_back({f[0].get<int>(), f[1].get<double>()});
            }
        }
        return {n, std::move(couplings), std::move(fields), j.value("label", std::string{})};
    } catch (const nlohmann::json::exception &e) {
        throw InputError(std::string("instance JSON: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

IsingInstance read_instance_file(const std::filesystem::path &path) {
    const auto text = read_text_file(path);
    const auto ext = path.extension().string();
    if (ext == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error &e) {
            throw ParseError(std::string("instance JSON: ") + e.what(), e.byte);
        }
        return instance_from_json(j);
    }
    if (ext == ".g6" || ext == ".graph6") {
        const auto graphs = parse_graph6_lines(text);
        if (graphs.empty()) {
            throw ParseError("graph6 file holds no graph", 0);
        }
        return to_instance(graphs.front(), 1.0, "graph6:" + path.filename().string());
    }
    auto inst = parse_edge_list(text);
    inst.set_label("edge-list:" + path.filename().string());
    return inst;
}

void write_instance_file(const std::filesystem::path &path, const IsingInstance &inst) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << instance_to_json(inst).dump(2) << '\n';
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

} // namespace pentao
