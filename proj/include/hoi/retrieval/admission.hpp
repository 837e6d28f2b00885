#pragma once

#include "hoi/common.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace hoi {

struct Box2D {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    double area() const { return std::max(0.0, x1 - x0) * std::max(0.0, y1 - y0); }
};

inline double box_iou(const Box2D& a, const Box2D& b) {
    const Box2D inter{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
    const double i = inter.area();
    const double u = a.area() + b.area() - i;
    return u > 0.0 ? i / u : 0.0;
}

struct Detection {
    std::string label;
    Box2D box;
};

struct ImageMetadata {
    int width = 0, height = 0;
    std::vector<Detection> detections;
};

struct AdmissionConfig {
    int min_dimension = 300;  // both sides must exceed this
    double iou_min = 0.01;    // open band (iou_min, iou_max)
    double iou_max = 0.95;
    std::string person_label = "person";
};

struct AdmissionDecision {
    bool accept = false;
    std::string reason;  // "accepted" or the first failed predicate
};

inline AdmissionDecision admit_database_image(const ImageMetadata& meta, const AdmissionConfig& config = {}) {
    require(meta.width > 0 && meta.height > 0, "image metadata needs a positive size");
    for (const auto& d : meta.detections) {
        require(!d.label.empty(), "detection without a class label");
        require(d.box.x1 >= d.box.x0 && d.box.y1 >= d.box.y0, "detection box with negative extent");
    }
    if (meta.width <= config.min_dimension || meta.height <= config.min_dimension) return {false, "min-dimension"};
    const Detection* person = nullptr;
    const Detection* object = nullptr;
    int persons = 0, objects = 0;
    for (const auto& d : meta.detections) {
        if (d.label == config.person_label) {
            ++persons;
            person = &d;
        } else {
            ++objects;
            object = &d;
        }
    }
    if (persons != 1) return {false, "person-count"};
    if (objects != 1) return {false, "object-count"};
    const double iou = box_iou(person->box, object->box);
    if (!(iou > config.iou_min && iou < config.iou_max)) return {false, "box-iou"};
    return {true, "accepted"};
}

}  // namespace hoi
