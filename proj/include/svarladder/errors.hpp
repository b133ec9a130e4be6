#pragma once

#include <stdexcept>
#include <string>

namespace svl {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what)
        : Error("dimension mismatch: " + what) {}
};

class NonFinite : public Error {
public:
    explicit NonFinite(const std::string& where)
        : Error("non-finite value in " + where) {}
};

class SelfStructuralCausality : public Error {
public:
    SelfStructuralCausality(int channel, double value)
        : Error("structural matrix has nonzero diagonal entry " +
                std::to_string(value) + " at channel " + std::to_string(channel)),
          channel(channel) {}
    int channel;
};

class DuplicateChannelName : public Error {
public:
    explicit DuplicateChannelName(const std::string& name)
        : Error("duplicate channel name \"" + name + "\""), name(name) {}
    std::string name;
};

class InvalidDimension : public Error {
public:
    explicit InvalidDimension(const std::string& what)
        : Error("invalid dimension: " + what) {}
};

class IncompleteWindow : public Error {
public:
    IncompleteWindow(int supplied, int required)
        : Error("observation window holds " + std::to_string(supplied) +
                " samples, needs " + std::to_string(required)) {}
};

class SingularInnovationCovariance : public Error {
public:
    explicit SingularInnovationCovariance(long step = -1)
        : Error(step < 0 ? std::string("innovation covariance numerically singular")
                         : "innovation covariance numerically singular at sample " +
                               std::to_string(step)),
          step(step) {}
    long step;
};

class ZeroVarianceChannel : public Error {
public:
    explicit ZeroVarianceChannel(const std::string& channel)
        : Error("channel \"" + channel + "\" has zero variance"), channel(channel) {}
    std::string channel;
};

class SeriesTooShort : public Error {
public:
    SeriesTooShort(long n, long required)
        : Error("series has " + std::to_string(n) + " samples, needs more than " +
                std::to_string(required)) {}
};

class RankDeficientRegressors : public Error {
public:
    explicit RankDeficientRegressors(int effect_channel)
        : Error("regressor matrix rank-deficient for effect channel " +
                std::to_string(effect_channel)),
          effect_channel(effect_channel) {}
    int effect_channel;
};

class UnstableModel : public Error {
public:
    explicit UnstableModel(double spectral_radius)
        : Error("reduced-form VAR unstable, spectral radius " +
                std::to_string(spectral_radius)),
          spectral_radius(spectral_radius) {}
    double spectral_radius;
};

class SingularStructure : public Error {
public:
    SingularStructure() : Error("(I - S0) is numerically singular") {}
};

class MalformedLine : public Error {
public:
    MalformedLine(long line, const std::string& content)
        : Error("malformed line " + std::to_string(line) + ": \"" + content + "\""),
          line(line),
          content(content) {}
    long line;
    std::string content;
};

class InconsistentColumnCount : public Error {
public:
    InconsistentColumnCount(long line, long got, long expected)
        : Error("line " + std::to_string(line) + " has " + std::to_string(got) +
                " columns, expected " + std::to_string(expected)),
          line(line) {}
    long line;
};

class EmptyFile : public Error {
public:
    explicit EmptyFile(const std::string& path) : Error("empty file: " + path) {}
};

class HeaderMismatch : public Error {
public:
    explicit HeaderMismatch(const std::string& what)
        : Error("header mismatch: " + what) {}
};

class SchemaViolation : public Error {
public:
    explicit SchemaViolation(const std::string& json_pointer)
        : Error("factor JSON schema violation at " + json_pointer),
          json_pointer(json_pointer) {}
    std::string json_pointer;
};

}  // namespace svl
