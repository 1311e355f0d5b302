#pragma once

#include <string>
#include <vector>

#include "topseg/geometry.hpp"
#include "topseg/object_class.hpp"

namespace topseg {

struct Joint {
    std::string name;
    Vec3d position;  // meters, local frame, z up, feet at z=0
};

struct BodySphere {
    Vec3d center;
    double radius = 0.0;
    ObjectClass part = ObjectClass::body;  // must be a body-part class
};

/// Sphere-set human model for one pose. Authored for a canonical standing
/// height; apply_skeleton_scale stretches it to a sampled body size.
struct HumanSkeleton {
    std::string pose_name;
    std::vector<Joint> joints;
    std::vector<BodySphere> spheres;
    double scale_factor = 1.0;

    /// Highest point of any sphere (top of the head for upright poses).
    double top_z() const;
};

/// Uniform scale about the ground plane: all joint coordinates and sphere
/// centers/radii multiplied by beta. Throws std::invalid_argument for beta <= 0.
HumanSkeleton apply_skeleton_scale(const HumanSkeleton& canonical, double beta);

/// Bundled pose collection. Text format, one record per pose:
///   pose <name>
///   joint <name> <x> <y> <z>
///   sphere <part-id> <cx> <cy> <cz> <r>
class PoseLibrary {
public:
    static PoseLibrary load(const std::string& path);
    static PoseLibrary parse(std::istream& in, const std::string& origin);

    const std::vector<HumanSkeleton>& poses() const { return poses_; }
    const HumanSkeleton& pose(std::size_t i) const { return poses_.at(i); }
    std::size_t size() const { return poses_.size(); }

private:
    std::vector<HumanSkeleton> poses_;
};

}  // namespace topseg
