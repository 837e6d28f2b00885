#pragma once

#include "hoi/exemplars/descriptor.hpp"
#include "hoi/exemplars/kmeans.hpp"
#include "hoi/geometry/mesh_io.hpp"
#include "hoi/parallel.hpp"
#include "hoi/priors/cache.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

namespace hoi {

struct Exemplar {
    PartLabeledMesh mesh;  // canonicalized
    ShapeDescriptor descriptor;
    std::size_t source_index = 0;  // position in the clustered input list
};

struct ExemplarSet {
    std::string category;
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<Exemplar> exemplars;  // one per cluster, in cluster order
};

inline std::vector<ShapeDescriptor> compute_descriptors(const std::vector<PartLabeledMesh>& meshes, unsigned jobs = 0) {
    std::vector<ShapeDescriptor> out(meshes.size());
    parallel_for(meshes.size(), [&](std::size_t i) { out[i] = shape_descriptor(meshes[i]); }, jobs);
    return out;
}

/// Clusters the descriptors of canonicalized meshes and keeps, per cluster,
/// the member closest to its center (ties to the lower input index). Every
/// representative is a distinct input mesh: if a cluster is empty or its
/// members are taken, the closest unused mesh overall stands in.
inline ExemplarSet select_representatives(const std::string& category, const std::vector<PartLabeledMesh>& meshes,
                                          int k = 20, std::uint64_t seed = 0, unsigned jobs = 0) {
    require(meshes.size() >= static_cast<std::size_t>(std::max(k, 1)), "need at least k meshes to select exemplars");
    const auto descriptors = compute_descriptors(meshes, jobs);
    const KMeansResult km = kmeans_pp(descriptors, k, seed);
    ExemplarSet set{category, k, seed, {}};
    std::vector<bool> used(meshes.size(), false);
    for (int c = 0; c < k; ++c) {
        std::size_t best = meshes.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (int pass = 0; pass < 2 && best == meshes.size(); ++pass)
            for (std::size_t i = 0; i < meshes.size(); ++i) {
                if (used[i] || (pass == 0 && km.assignment[i] != c)) continue;
                const double d = (descriptors[i] - km.centers[c]).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
        used[best] = true;
        set.exemplars.push_back({meshes[best], descriptors[best], best});
    }
    return set;
}

inline std::string descriptor_checksum(const ShapeDescriptor& d) {
    const std::string_view bytes(reinterpret_cast<const char*>(d.data()), static_cast<std::size_t>(d.size()) * sizeof(double));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

/// Directory layout: manifest.json, exemplar_NN.obj (+ .parts sidecar) and
/// descriptors.bin (raw doubles, exemplar after exemplar).
inline void write_exemplar_set(const ExemplarSet& set, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest = {{"category", set.category}, {"k", set.k}, {"seed", set.seed},
                               {"descriptor_resolution", kDescriptorResolution}, {"exemplars", nlohmann::json::array()}};
    std::ofstream bin(dir / "descriptors.bin", std::ios::binary);
    if (!bin) fail(ErrorKind::Io, "cannot write " + (dir / "descriptors.bin").string());
    for (std::size_t i = 0; i < set.exemplars.size(); ++i) {
        const auto& e = set.exemplars[i];
        char name[32];
        std::snprintf(name, sizeof name, "exemplar_%02zu.obj", i);
        write_labeled_mesh(e.mesh, dir / name);
        bin.write(reinterpret_cast<const char*>(e.descriptor.data()), static_cast<std::streamsize>(e.descriptor.size() * sizeof(double)));
        manifest["exemplars"].push_back({{"mesh", name}, {"source_index", e.source_index}, {"descriptor_checksum", descriptor_checksum(e.descriptor)}});
    }
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
}

inline ExemplarSet read_exemplar_set(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) fail(ErrorKind::Io, "cannot open " + (dir / "manifest.json").string());
    ExemplarSet set;
    std::ifstream bin(dir / "descriptors.bin", std::ios::binary);
    if (!bin) fail(ErrorKind::Io, "cannot open " + (dir / "descriptors.bin").string());
    try {
        const auto j = nlohmann::json::parse(in);
        set.category = j.at("category").get<std::string>();
        set.k = j.at("k").get<int>();
        set.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& e : j.at("exemplars")) {
            Exemplar ex;
            ex.mesh = read_labeled_mesh(dir / e.at("mesh").get<std::string>());
            ex.source_index = e.at("source_index").get<std::size_t>();
            ex.descriptor.resize(kDescriptorSize);
            bin.read(reinterpret_cast<char*>(ex.descriptor.data()), kDescriptorSize * sizeof(double));
            if (!bin) fail(ErrorKind::Io, "descriptors.bin is truncated");
            if (descriptor_checksum(ex.descriptor) != e.at("descriptor_checksum").get<std::string>())
                fail(ErrorKind::InvalidInput, "descriptor checksum mismatch for " + e.at("mesh").get<std::string>());
            set.exemplars.push_back(std::move(ex));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, "malformed exemplar manifest: " + std::string(e.what()));
    }
    require(!set.exemplars.empty(), "exemplar set is empty");
    require(set.exemplars.size() == static_cast<std::size_t>(set.k), "exemplar count does not match k");
    return set;
}

}  // namespace hoi
