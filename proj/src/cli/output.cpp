#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tfe/cli.hpp"
#include "tfe/error.hpp"

namespace tfe::cli {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

std::string join_point(const RealPoint& p) {
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) s += (i ? ";" : "") + fmt(p[i]);
  return s;
}

std::pair<int, int> plane_axes(const std::string& plane) {
  if (plane == "x1x2") return {0, 1};
  if (plane == "x1x3") return {0, 2};
  return {1, 2};
}

}  // namespace

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
}

void write_mu_csv(const std::filesystem::path& path, const DirectionField& field) {
  std::ofstream out = open_out(path);
  out << "x1,x2,x3,re_mu,im_mu,is_inf,branch,singular\n";
  for (size_t n = 0; n < field.grid.size(); ++n) {
    if (field.state[n] == kUnreached) continue;
    Vec3 x = field.grid.node(n);
    out << fmt(x[0]) << ',' << fmt(x[1]) << ',' << fmt(x[2]) << ',';
    if (field.state[n] == kSingular) {
      out << "nan,nan,0,-1,1\n";
      continue;
    }
    const ExtendedComplex& m = field.mu[n];
    if (m.is_inf()) {
      out << "inf,inf,1,";
    } else {
      out << fmt(m.value().real()) << ',' << fmt(m.value().imag()) << ",0,";
    }
    out << field.branch[n] << ",0\n";
  }
}

void write_leaves_csv(const std::filesystem::path& path, const std::vector<Leaf>& leaves) {
  std::ofstream out = open_out(path);
  out << "leaf_id,s,x1,x2,x3\n";
  for (size_t id = 0; id < leaves.size(); ++id) {
    const Leaf& l = leaves[id];
    for (size_t i = 0; i < l.points.size(); ++i) {
      const Vec3& p = l.points[i];
      out << id << ',' << fmt(l.arclength[i]) << ',' << fmt(p[0]) << ',' << fmt(p[1]) << ',' << fmt(p[2]) << '\n';
    }
  }
}

void write_leaves_svg(const std::filesystem::path& path, const std::vector<Leaf>& leaves, const std::string& plane) {
  auto [ia, ib] = plane_axes(plane);
  double lo_a = std::numeric_limits<double>::infinity(), hi_a = -lo_a;
  double lo_b = lo_a, hi_b = -lo_a;
  for (const Leaf& l : leaves) {
    for (const Vec3& p : l.points) {
      lo_a = std::min(lo_a, p[ia]);
      hi_a = std::max(hi_a, p[ia]);
      lo_b = std::min(lo_b, p[ib]);
      hi_b = std::max(hi_b, p[ib]);
    }
  }
  if (!std::isfinite(lo_a)) lo_a = hi_a = lo_b = hi_b = 0.0;
  double wa = hi_a - lo_a, wb = hi_b - lo_b;
  double pad = std::max(wa, wb) > 0.0 ? 0.0 : 1.0;
  double ma = wa > 0.0 ? 0.05 * wa : 0.05 * std::max(wb, pad);
  double mb = wb > 0.0 ? 0.05 * wb : 0.05 * std::max(wa, pad);
  double x0 = lo_a - ma, w = wa + 2 * ma;
  // y is flipped so the second axis points up
  double y0 = -(hi_b + mb), h = wb + 2 * mb;
  static const char* names[3] = {"x1", "x2", "x3"};

  std::ofstream out = open_out(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"" << fmt(std::round(800.0 * h / w))
      << "\" viewBox=\"" << fmt(x0) << ' ' << fmt(y0) << ' ' << fmt(w) << ' ' << fmt(h) << "\">\n";
  out << "<title>leaves projected on " << names[ia] << names[ib] << "</title>\n";
  out << "<g fill=\"none\" stroke=\"#999999\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\">\n";
  if (x0 <= 0.0 && 0.0 <= x0 + w) {
    out << "<line x1=\"0\" y1=\"" << fmt(y0) << "\" x2=\"0\" y2=\"" << fmt(y0 + h)
        << "\" vector-effect=\"non-scaling-stroke\"/>\n";
  }
  if (y0 <= 0.0 && 0.0 <= y0 + h) {
    out << "<line x1=\"" << fmt(x0) << "\" y1=\"0\" x2=\"" << fmt(x0 + w)
        << "\" y2=\"0\" vector-effect=\"non-scaling-stroke\"/>\n";
  }
  out << "</g>\n";
  out << "<g fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\">\n";
  for (const Leaf& l : leaves) {
    out << "<polyline vector-effect=\"non-scaling-stroke\" points=\"";
    for (size_t i = 0; i < l.points.size(); ++i) {
      out << (i ? " " : "") << fmt(l.points[i][ia]) << ',' << fmt(-l.points[i][ib]);
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
  std::ofstream out = open_out(path);
  out << "equation,point,h,value,order_estimate\n";
  for (const ReportRow& r : rows) {
    out << r.equation << ',' << join_point(r.point) << ',' << fmt(r.h) << ',' << fmt(r.value) << ','
        << fmt(r.order) << '\n';
  }
}

}  // namespace tfe::cli
