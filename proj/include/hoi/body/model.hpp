#pragma once

#include "hoi/body/params.hpp"
#include "hoi/geometry/mesh.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace hoi {

struct BodyMesh {
    PartLabeledMesh mesh;
    Points3 joints;
};

using JointJacobian = Eigen::Matrix<double, 3 * kJointCount, kBodyParamDims>;

/// Body-model evaluator contract: (betas, pose, translation) -> labeled mesh
/// and 24 joints, deterministic. Implementations supply the part vocabulary
/// and the table of named body regions (unions of mesh parts).
class BodyModel {
public:
    virtual ~BodyModel() = default;

    virtual std::string name() const = 0;
    virtual BodyMesh evaluate(const BodyParams& params) const = 0;

    virtual Points3 joints(const BodyParams& params) const { return evaluate(params).joints; }

    /// d joints / d flattened params, rows ordered (joint, xyz). The default
    /// uses central differences; implementations with exact derivatives
    /// should override.
    virtual JointJacobian joint_jacobian(const BodyParams& params) const {
        JointJacobian jac;
        const BodyParamVector x = params.flatten();
        const double h = 1e-6;
        for (int c = 0; c < kBodyParamDims; ++c) {
            BodyParamVector xp = x, xm = x;
            xp[c] += h;
            xm[c] -= h;
            const Points3 jp = joints(BodyParams::unflatten(xp)), jm = joints(BodyParams::unflatten(xm));
            for (int j = 0; j < kJointCount; ++j) jac.block<3, 1>(3 * j, c) = (jp[j] - jm[j]) / (2 * h);
        }
        return jac;
    }

    /// Named regions, each a set of mesh part names. Every mesh part name is
    /// also a region of itself.
    virtual std::map<std::string, std::set<std::string>> regions() const = 0;

    std::vector<std::string> vocabulary() const {
        std::vector<std::string> out;
        for (const auto& [name, parts] : regions()) out.push_back(name);
        return out;
    }
};

/// Part ids of `mesh` covered by region `name`; empty when unknown.
inline std::set<PartId> resolve_body_region(const PartLabeledMesh& mesh,
                                           const std::map<std::string, std::set<std::string>>& regions,
                                           const std::string& name) {
    std::set<PartId> ids;
    if (auto direct = mesh.find_part(name)) ids.insert(*direct);
    if (auto it = regions.find(name); it != regions.end())
        for (const auto& part : it->second)
            if (auto id = mesh.find_part(part)) ids.insert(*id);
    return ids;
}

}  // namespace hoi
