#include "wishart/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace wishart {

using nlohmann::json;

void save_checkpoint(const std::string& path, const CheckpointData& data) {
    json doc;
    doc["format_version"] = kCheckpointFormatVersion;
    doc["config_hash"] = data.config_hash;
    doc["replicas"] = data.replicas;
    doc["batch_size"] = data.batch_size;
    doc["anchor"] = data.anchor;
    json batches = json::array();
    for (const auto& b : data.batches) {
        batches.push_back({{"index", b.index},
                           {"count", b.count},
                           {"s1", b.s1},
                           {"s2", b.s2},
                           {"s3", b.s3},
                           {"s4", b.s4}});
    }
    doc["batches"] = std::move(batches);

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint file " + tmp);
        out << doc.dump();
        out.flush();
        if (!out) throw CheckpointError("short write on checkpoint file " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw CheckpointError("cannot move checkpoint into place: " + ec.message());
}

std::optional<CheckpointData> load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw CheckpointError("checkpoint " + path + " is not valid JSON: " + e.what());
    }
    try {
        if (doc.at("format_version").get<int>() != kCheckpointFormatVersion)
            throw CheckpointError("checkpoint " + path + " has unsupported format version");
        CheckpointData data;
        data.config_hash = doc.at("config_hash").get<std::uint64_t>();
        data.replicas = doc.at("replicas").get<std::uint64_t>();
        data.batch_size = doc.at("batch_size").get<std::uint64_t>();
        data.anchor = doc.at("anchor").get<std::vector<double>>();
        for (const auto& b : doc.at("batches")) {
            BatchPartial partial;
            partial.index = b.at("index").get<std::uint64_t>();
            partial.count = b.at("count").get<std::uint64_t>();
            partial.s1 = b.at("s1").get<std::vector<double>>();
            partial.s2 = b.at("s2").get<std::vector<double>>();
            partial.s3 = b.at("s3").get<std::vector<double>>();
            partial.s4 = b.at("s4").get<std::vector<double>>();
            data.batches.push_back(std::move(partial));
        }
        return data;
    } catch (const json::exception& e) {
        throw CheckpointError("checkpoint " + path + " is malformed: " + e.what());
    }
}

}  // namespace wishart
