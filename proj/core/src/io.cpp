#include "nls/io.hpp"

#include <cstdio>
#include <fstream>

namespace nls {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRecord>& records,
                     const ProblemParams& params) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::InvalidArgument, "cannot open " + path);
  os << "# N=" << params.N << " q=" << fmt17(params.q)
     << " a=" << fmt17(params.a) << "\n";
  os << "mu,lambda,grad_sq,lq_q,l2star,energy,center,s_mu,eps_mu,"
        "profile_err,branch_id,p_class\n";
  for (const auto& r : records) {
    os << fmt17(r.mu) << ',' << fmt17(r.lambda) << ',' << fmt17(r.grad_sq)
       << ',' << fmt17(r.lq_q) << ',' << fmt17(r.l2star) << ','
       << fmt17(r.energy) << ',' << fmt17(r.center) << ','
       << (r.s_mu ? fmt17(*r.s_mu) : "") << ','
       << (r.eps_mu ? fmt17(*r.eps_mu) : "") << ','
       << (r.profile_err ? fmt17(*r.profile_err) : "") << ',' << r.branch_id
       << ',' << to_string(r.p_class) << "\n";
  }
}

void write_xy_csv(const std::string& path, const std::string& xlabel,
                  const std::string& ylabel, const std::vector<double>& xs,
                  const std::vector<double>& ys) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::InvalidArgument, "cannot open " + path);
  os << xlabel << ',' << ylabel << "\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    os << fmt17(xs[i]) << ',' << fmt17(ys[i]) << "\n";
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::InvalidArgument, "cannot open " + path);
  os << j.dump(2) << "\n";
}

Json verdict_json(const CheckReport& rep) {
  Json out;
  out["check"] = rep.check;
  for (const char* key : {"predicted", "measured", "tolerance"})
    if (rep.details.contains(key)) out[key] = rep.details.at(key);
  out["pass"] = rep.pass;
  out["details"] = rep.details;
  return out;
}

Json constants_json(const ProblemParams& params, const Constants& c) {
  Json j{{"N", params.N},
         {"q", params.q},
         {"S", c.S},
         {"C_Nq", c.C_Nq},
         {"nu0", c.nu0},
         {"sigma0", c.sigma0},
         {"soliton_center", c.soliton_center},
         {"soliton_norms",
          Json{{"mass_sq", c.soliton_mass_sq},
               {"lq_q", c.soliton_lq_q},
               {"grad_sq", c.soliton_grad_sq}}},
         {"phi0_mass_sq", c.phi0_mass_sq}};
  if (c.alpha_crit) j["alpha_crit"] = *c.alpha_crit;
  else j["nu_a"] = c.nu_a;
  return j;
}

Json branch_json(const SolutionBranch& s, const ProblemParams& params) {
  return Json{{"lambda", s.lambda},
              {"center", s.center},
              {"mass_sq", s.mass_sq},
              {"energy", s.energy},
              {"grad_sq", s.norms.grad_sq},
              {"lq_q", s.norms.lq_q},
              {"l2star", s.norms.l2s},
              {"pohozaev_res", s.pohozaev_res},
              {"lagrange_res", s.lagrange_res},
              {"p_class", to_string(s.p_class)},
              {"branch_id", s.branch_id},
              {"mu", params.mu},
              {"a", params.a}};
}

Json error_json(const Error& e) {
  return Json{{"error", to_string(e.kind())}, {"message", e.what()}};
}

}  // namespace nls
