#include "fable/object.hpp"

#include <algorithm>

namespace fable {

ObjectSpec ObjectSpec::cylinder(std::string id, Color c, double radius_cm,
                                double height_cm, double weight_g) {
    ObjectSpec o;
    o.id = std::move(id);
    o.color = c;
    o.shape = Shape::cylinder;
    o.dims.radius = radius_cm;
    o.dims.height = height_cm;
    o.weight_g = weight_g;
    return o;
}

ObjectSpec ObjectSpec::cube(std::string id, Color c, double edge_cm,
                            double weight_g) {
    ObjectSpec o;
    o.id = std::move(id);
    o.color = c;
    o.shape = Shape::cube;
    o.dims.edge = edge_cm;
    o.weight_g = weight_g;
    return o;
}

ObjectSpec ObjectSpec::sphere(std::string id, Color c, double diameter_cm,
                              double weight_g) {
    ObjectSpec o;
    o.id = std::move(id);
    o.color = c;
    o.shape = Shape::sphere;
    o.dims.diameter = diameter_cm;
    o.weight_g = weight_g;
    return o;
}

ObjectSpec ObjectSpec::cuboid(std::string id, Color c, double l_cm, double w_cm,
                              double h_cm, double weight_g) {
    ObjectSpec o;
    o.id = std::move(id);
    o.color = c;
    o.shape = Shape::cuboid;
    o.dims.length = l_cm;
    o.dims.width = w_cm;
    o.dims.height = h_cm;
    o.weight_g = weight_g;
    return o;
}

void validate(const ObjectSpec& obj) {
    auto positive = [&](double v, const char* what) {
        if (!(v > 0.0))
            throw std::invalid_argument("object '" + obj.id + "': " + what +
                                        " must be strictly positive");
    };
    positive(obj.weight_g, "weight");
    switch (obj.shape) {
        case Shape::cylinder:
            positive(obj.dims.radius, "radius");
            positive(obj.dims.height, "height");
            break;
        case Shape::cube:
            positive(obj.dims.edge, "edge");
            break;
        case Shape::sphere:
            positive(obj.dims.diameter, "diameter");
            break;
        case Shape::cuboid:
            positive(obj.dims.length, "length");
            positive(obj.dims.width, "width");
            positive(obj.dims.height, "height");
            break;
    }
}

double characteristic_length_cm(const ObjectSpec& obj) {
    switch (obj.shape) {
        case Shape::cylinder: return obj.dims.height;
        case Shape::cube: return obj.dims.edge;
        case Shape::sphere: return obj.dims.diameter;
        case Shape::cuboid:
            return std::max(obj.dims.length,
                            std::max(obj.dims.width, obj.dims.height));
    }
    return 0.0;
}

const char* to_string(Color c) {
    switch (c) {
        case Color::red: return "red";
        case Color::green: return "green";
        case Color::blue: return "blue";
        case Color::yellow: return "yellow";
        case Color::white: return "white";
        case Color::black: return "black";
    }
    return "?";
}

const char* to_string(Shape s) {
    switch (s) {
        case Shape::cylinder: return "cylinder";
        case Shape::cube: return "cube";
        case Shape::sphere: return "sphere";
        case Shape::cuboid: return "cuboid";
    }
    return "?";
}

Color color_from_string(const std::string& s) {
    if (s == "red") return Color::red;
    if (s == "green") return Color::green;
    if (s == "blue") return Color::blue;
    if (s == "yellow") return Color::yellow;
    if (s == "white") return Color::white;
    if (s == "black") return Color::black;
    throw std::invalid_argument("unknown color '" + s + "'");
}

Shape shape_from_string(const std::string& s) {
    if (s == "cylinder") return Shape::cylinder;
    if (s == "cube") return Shape::cube;
    if (s == "sphere") return Shape::sphere;
    if (s == "cuboid") return Shape::cuboid;
    throw std::invalid_argument("unknown shape '" + s + "'");
}

std::array<double, 3> rgb(Color c) {
    switch (c) {
        case Color::red: return {1.0, 0.0, 0.0};
        case Color::green: return {0.0, 1.0, 0.0};
        case Color::blue: return {0.0, 0.0, 1.0};
        case Color::yellow: return {1.0, 1.0, 0.0};
        case Color::white: return {1.0, 1.0, 1.0};
        case Color::black: return {0.0, 0.0, 0.0};
    }
    return {0.0, 0.0, 0.0};
}

}  // namespace fable
