#include "topseg/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "topseg/errors.hpp"

namespace topseg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyBinding {
    std::string name;
    std::function<void(PipelineConfig&, const std::string&)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

std::string format_float(float v) {
    std::ostringstream out;
    out.precision(9);  // float round-trips at max_digits10
    out << v;
    return out.str();
}

float to_float(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const float f = std::stof(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return f;
    } catch (const std::exception&) {
        throw ConfigError("bad float for key '" + key + "': " + v);
    }
}

long long to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for key '" + key + "': " + v);
    }
}

std::vector<KeyBinding> make_bindings() {
    std::vector<KeyBinding> keys;
    auto add_float = [&](const std::string& name, float PipelineConfig::* member) {
        keys.push_back({name,
                        [member, name](PipelineConfig& c, const std::string& v) {
                            c.*member = to_float(v, name);
                        },
                        [member](const PipelineConfig& c) { return format_float(c.*member); }});
    };
    auto add_int = [&](const std::string& name, int PipelineConfig::* member) {
        keys.push_back({name,
                        [member, name](PipelineConfig& c, const std::string& v) {
                            c.*member = int(to_int(v, name));
                        },
                        [member](const PipelineConfig& c) { return std::to_string(c.*member); }});
    };
    auto add_string = [&](const std::string& name, std::string PipelineConfig::* member) {
        keys.push_back({name,
                        [member](PipelineConfig& c, const std::string& v) { c.*member = v; },
                        [member](const PipelineConfig& c) { return c.*member; }});
    };
    auto add_range = [&](const std::string& name, CountRange PipelineConfig::* member) {
        keys.push_back({name,
                        [member, name](PipelineConfig& c, const std::string& v) {
                            const auto colon = v.find(':');
                            if (colon == std::string::npos)
                                throw ConfigError("expected min:max for key '" + name + "': " + v);
                            CountRange r;
                            r.min = int(to_int(trim(v.substr(0, colon)), name));
                            r.max = int(to_int(trim(v.substr(colon + 1)), name));
                            if (r.min < 0 || r.max < r.min)
                                throw ConfigError("bad range for key '" + name + "': " + v);
                            c.*member = r;
                        },
                        [member](const PipelineConfig& c) {
                            return std::to_string((c.*member).min) + ":" +
                                   std::to_string((c.*member).max);
                        }});
    };

    add_float("extent_w", &PipelineConfig::extent_w);
    add_float("extent_h", &PipelineConfig::extent_h);
    add_float("camera_height", &PipelineConfig::camera_height);
    add_float("theta_prime", &PipelineConfig::theta_prime);
    add_float("rel_free", &PipelineConfig::rel_free);
    add_float("rel_adjacent", &PipelineConfig::rel_adjacent);
    add_float("rel_partial", &PipelineConfig::rel_partial);
    add_float("rel_stacked", &PipelineConfig::rel_stacked);
    add_float("rel_touch", &PipelineConfig::rel_touch);
    add_float("human_height_min", &PipelineConfig::human_height_min);
    add_float("human_height_max", &PipelineConfig::human_height_max);
    add_float("canonical_stand_height", &PipelineConfig::canonical_stand_height);
    add_float("furniture_height_min", &PipelineConfig::furniture_height_min);
    add_float("furniture_height_max", &PipelineConfig::furniture_height_max);
    add_float("plant_height_min", &PipelineConfig::plant_height_min);
    add_float("plant_height_max", &PipelineConfig::plant_height_max);
    add_int("rejection_cap", &PipelineConfig::rejection_cap);
    add_int("max_humans", &PipelineConfig::max_humans);
    add_range("mix_human", &PipelineConfig::mix_human);
    add_range("mix_table", &PipelineConfig::mix_table);
    add_range("mix_storage", &PipelineConfig::mix_storage);
    add_range("mix_chair", &PipelineConfig::mix_chair);
    add_range("mix_plant", &PipelineConfig::mix_plant);
    add_string("pose_library", &PipelineConfig::pose_library);

    add_int("width", &PipelineConfig::width);
    add_int("height", &PipelineConfig::height);
    keys.push_back({"projection",
                    [](PipelineConfig& c, const std::string& v) {
                        if (v == "orthographic")
                            c.projection = Projection::orthographic;
                        else if (v == "pinhole")
                            c.projection = Projection::pinhole;
                        else
                            throw ConfigError("projection must be orthographic or pinhole: " + v);
                    },
                    [](const PipelineConfig& c) {
                        return std::string(c.projection == Projection::orthographic ? "orthographic"
                                                                                    : "pinhole");
                    }});
    add_float("fov_y_deg", &PipelineConfig::fov_y_deg);
    add_float("sigma", &PipelineConfig::sigma);

    add_int("pc", &PipelineConfig::pc);
    add_int("patch_w", &PipelineConfig::patch_w);
    add_int("patch_h", &PipelineConfig::patch_h);
    keys.push_back({"scaled_offsets",
                    [](PipelineConfig& c, const std::string& v) {
                        if (v == "true" || v == "1")
                            c.scaled_offsets = true;
                        else if (v == "false" || v == "0")
                            c.scaled_offsets = false;
                        else
                            throw ConfigError("scaled_offsets must be true or false: " + v);
                    },
                    [](const PipelineConfig& c) {
                        return std::string(c.scaled_offsets ? "true" : "false");
                    }});

    add_int("depth", &PipelineConfig::depth);
    add_int("trees", &PipelineConfig::trees);
    add_int("frames_per_tree", &PipelineConfig::frames_per_tree);
    add_int("thresholds_per_feature", &PipelineConfig::thresholds_per_feature);
    add_int("response_samples", &PipelineConfig::response_samples);
    add_float("min_info_gain", &PipelineConfig::min_info_gain);
    add_float("bagging_fraction", &PipelineConfig::bagging_fraction);
    add_float("leaf_laplace", &PipelineConfig::leaf_laplace);
    keys.push_back({"split_kind",
                    [](PipelineConfig& c, const std::string& v) {
                        if (v == "linear")
                            c.split_kind = SplitKind::linear;
                        else if (v == "axis" || v == "axis-aligned")
                            c.split_kind = SplitKind::axis_aligned;
                        else
                            throw ConfigError("split_kind must be linear or axis: " + v);
                    },
                    [](const PipelineConfig& c) {
                        return std::string(c.split_kind == SplitKind::linear ? "linear" : "axis");
                    }});
    add_int("pixels_per_class", &PipelineConfig::pixels_per_class);

    add_float("lambda", &PipelineConfig::lambda);
    add_int("neighborhood", &PipelineConfig::neighborhood);
    add_int("max_sweeps", &PipelineConfig::max_sweeps);
    add_string("lambda_grid", &PipelineConfig::lambda_grid);

    add_int("dataset_frames", &PipelineConfig::dataset_frames);
    add_int("test_frames", &PipelineConfig::test_frames);
    add_int("val_frames", &PipelineConfig::val_frames);
    add_string("noise_sigmas", &PipelineConfig::noise_sigmas);
    add_string("split_pcs", &PipelineConfig::split_pcs);
    add_string("modeling_fs", &PipelineConfig::modeling_fs);

    keys.push_back({"threads",
                    [](PipelineConfig& c, const std::string& v) {
                        c.threads = unsigned(to_int(v, "threads"));
                    },
                    [](const PipelineConfig& c) { return std::to_string(c.threads); }});
    keys.push_back({"seed",
                    [](PipelineConfig& c, const std::string& v) {
                        try {
                            c.seed = std::stoull(v);
                        } catch (const std::exception&) {
                            throw ConfigError("bad integer for key 'seed': " + v);
                        }
                    },
                    [](const PipelineConfig& c) { return std::to_string(c.seed); }});
    return keys;
}

const std::vector<KeyBinding>& bindings() {
    static const std::vector<KeyBinding> keys = make_bindings();
    return keys;
}

const KeyBinding* find_key(const std::string& name) {
    for (const auto& k : bindings())
        if (k.name == name) return &k;
    return nullptr;
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text, const std::string& origin,
                                 PipelineConfig base) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const KeyBinding* binding = find_key(key);
        if (!binding)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        binding->set(base, value);
    }
    return base;
}

PipelineConfig load_config(const std::string& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path, base);
}

void apply_config_override(PipelineConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like key=value: " + assignment);
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    const KeyBinding* binding = find_key(key);
    if (!binding) throw ConfigError("unknown key '" + key + "'");
    binding->set(config, value);
}

std::string dump_config(const PipelineConfig& config) {
    std::ostringstream out;
    for (const auto& k : bindings()) out << k.name << " = " << k.get(config) << '\n';
    return out.str();
}

std::vector<float> parse_float_list(const std::string& text) {
    std::vector<float> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) continue;
        values.push_back(to_float(t, "list"));
    }
    return values;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) continue;
        values.push_back(int(to_int(t, "list")));
    }
    return values;
}

SceneModelConfig scene_model_from(const PipelineConfig& config) {
    SceneModelConfig m;
    m.extent_w = config.extent_w;
    m.extent_h = config.extent_h;
    m.camera_height = config.camera_height;
    m.human_height_min = config.human_height_min;
    m.human_height_max = config.human_height_max;
    m.canonical_stand_height = config.canonical_stand_height;
    m.furniture_height_min = config.furniture_height_min;
    m.furniture_height_max = config.furniture_height_max;
    m.plant_height_min = config.plant_height_min;
    m.plant_height_max = config.plant_height_max;
    m.rejection_cap = config.rejection_cap;
    m.max_humans = config.max_humans;
    return m;
}

InteractionParams interaction_params_from(const PipelineConfig& config) {
    InteractionParams p;
    p.theta_prime = config.theta_prime;
    p.relationship_weights = {config.rel_free, config.rel_adjacent, config.rel_partial,
                              config.rel_stacked, config.rel_touch};
    return p;
}

ClassMix class_mix_from(const PipelineConfig& config) {
    ClassMix mix;
    mix.human = config.mix_human;
    mix.table = config.mix_table;
    mix.storage = config.mix_storage;
    mix.chair = config.mix_chair;
    mix.plant = config.mix_plant;
    return mix;
}

Camera camera_from(const PipelineConfig& config) {
    Camera cam;
    cam.width = config.width;
    cam.height = config.height;
    cam.projection = config.projection;
    cam.fov_y_deg = config.fov_y_deg;
    return cam;
}

TrainConfig train_config_from(const PipelineConfig& config) {
    TrainConfig t;
    t.max_depth = config.depth;
    t.tree_count = config.trees;
    t.frames_per_tree = config.frames_per_tree;
    t.thresholds_per_feature = config.thresholds_per_feature;
    t.response_samples = config.response_samples;
    t.min_info_gain = config.min_info_gain;
    t.bagging_fraction = config.bagging_fraction;
    t.leaf_laplace = config.leaf_laplace;
    t.split_kind = config.split_kind;
    t.pixels_per_class = config.pixels_per_class;
    t.threads = config.threads;
    t.seed = config.seed;
    return t;
}

}  // namespace topseg
