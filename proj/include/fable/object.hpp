#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace fable {

enum class Color { red, green, blue, yellow, white, black };
enum class Shape { cylinder, cube, sphere, cuboid };

inline constexpr int kColorCount = 6;
inline constexpr int kShapeCount = 4;

/// Shape-dependent dimensions, all in cm. Unused fields stay zero.
///   cylinder: radius + height
///   cube:     edge
///   sphere:   diameter
///   cuboid:   length x width x height
struct Dimensions {
    double radius = 0.0;
    double height = 0.0;
    double edge = 0.0;
    double diameter = 0.0;
    double length = 0.0;
    double width = 0.0;
};

/// Ground-truth physical description of one object.
struct ObjectSpec {
    std::string id;
    Color color = Color::red;
    Shape shape = Shape::cylinder;
    Dimensions dims;
    double weight_g = 0.0;

    static ObjectSpec cylinder(std::string id, Color c, double radius_cm,
                               double height_cm, double weight_g);
    static ObjectSpec cube(std::string id, Color c, double edge_cm,
                           double weight_g);
    static ObjectSpec sphere(std::string id, Color c, double diameter_cm,
                             double weight_g);
    static ObjectSpec cuboid(std::string id, Color c, double l_cm, double w_cm,
                             double h_cm, double weight_g);
};

/// Throws std::invalid_argument if any dimension or the weight is not
/// strictly positive.
void validate(const ObjectSpec& obj);

/// The single length used for the size channel: cylinder height, cube edge,
/// sphere diameter, longest cuboid side.
double characteristic_length_cm(const ObjectSpec& obj);

const char* to_string(Color c);
const char* to_string(Shape s);
Color color_from_string(const std::string& s);
Shape shape_from_string(const std::string& s);

/// Normalized RGB triple for the six supported colors.
std::array<double, 3> rgb(Color c);

}  // namespace fable
