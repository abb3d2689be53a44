#include "xsect/section/export.hpp"

#include <iomanip>

namespace xsect::section {

namespace {

constexpr const char* kAxes[] = {"x", "y", "z"};

void header(std::ostream& out, const char* prefix, int dim) {
  for (int i = 0; i < dim; ++i) out << (i == 0 ? "" : ",") << prefix << kAxes[i];
}

void coords(std::ostream& out, const Point& p, int dim) {
  for (int i = 0; i < dim; ++i) out << (i == 0 ? "" : ",") << p[i];
}

}  // namespace

void writeSectionCsv(std::ostream& out, const CrossSection& section, const CircleMap& f, int dim) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  header(out, "", dim);
  out << ",F_residual,";
  header(out, "n", dim);
  out << '\n';
  for (const auto& s : section.samples) {
    coords(out, s.point, dim);
    out << ',' << f.residual(s.point, section.level) << ',';
    coords(out, s.normal, dim);
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

void writePoincareCsv(std::ostream& out, const PoincareData& pd, int dim) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  header(out, "seed_", dim);
  out << ",tau,";
  header(out, "image_", dim);
  out << '\n';
  for (std::size_t i = 0; i < pd.seeds.size(); ++i) {
    coords(out, pd.seeds[i], dim);
    out << ',' << pd.returnTimes[i] << ',';
    coords(out, pd.images[i], dim);
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace xsect::section
