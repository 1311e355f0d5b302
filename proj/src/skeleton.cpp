#include "topseg/skeleton.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "topseg/errors.hpp"

namespace topseg {

double HumanSkeleton::top_z() const {
    double top = 0.0;
    for (const auto& s : spheres) top = std::max(top, s.center.z + s.radius);
    return top;
}

HumanSkeleton apply_skeleton_scale(const HumanSkeleton& canonical, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("skeleton scale factor must be positive");
    HumanSkeleton scaled = canonical;
    for (auto& j : scaled.joints) j.position = j.position * beta;
    for (auto& s : scaled.spheres) {
        s.center = s.center * beta;
        s.radius *= beta;
    }
    scaled.scale_factor = canonical.scale_factor * beta;
    return scaled;
}

PoseLibrary PoseLibrary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pose library: " + path);
    return parse(in, path);
}

PoseLibrary PoseLibrary::parse(std::istream& in, const std::string& origin) {
    PoseLibrary lib;
    HumanSkeleton current;
    bool open = false;
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        throw IoError(origin + ":" + std::to_string(line_no) + ": " + what);
    };
    auto finish = [&]() {
        if (!open) return;
        if (current.spheres.empty()) fail("pose '" + current.pose_name + "' has no spheres");
        lib.poses_.push_back(std::move(current));
        current = HumanSkeleton{};
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "pose") {
            finish();
            if (!(ls >> current.pose_name)) fail("pose record missing name");
            open = true;
        } else if (tag == "joint") {
            if (!open) fail("joint before any pose record");
            Joint j;
            if (!(ls >> j.name >> j.position.x >> j.position.y >> j.position.z))
                fail("malformed joint line");
            current.joints.push_back(j);
        } else if (tag == "sphere") {
            if (!open) fail("sphere before any pose record");
            int part = -1;
            BodySphere s;
            if (!(ls >> part >> s.center.x >> s.center.y >> s.center.z >> s.radius))
                fail("malformed sphere line");
            if (part < 0 || part >= kClassCount || !is_body_part(static_cast<ObjectClass>(part)))
                fail("sphere part id " + std::to_string(part) + " is not a body-part class");
            if (!(s.radius > 0.0)) fail("sphere radius must be positive");
            s.part = static_cast<ObjectClass>(part);
            current.spheres.push_back(s);
        } else {
            fail("unknown record tag '" + tag + "'");
        }
    }
    finish();
    if (lib.poses_.empty()) throw IoError(origin + ": pose library is empty");
    return lib;
}

}  // namespace topseg
