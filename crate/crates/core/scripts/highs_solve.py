"""Solve an LP file with HiGHS and write the plain `name value` dialect.

usage: highs_solve.py MODEL_LP SOLUTION_TXT TIME_LIMIT_S
"""
import sys

import highspy


def main():
    model_path, solution_path, time_limit = sys.argv[1], sys.argv[2], float(sys.argv[3])
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", time_limit)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if h.readModel(model_path) != highspy.HighsStatus.kOk:
        print(f"cannot read {model_path}", file=sys.stderr)
        return 1
    h.run()
    text = h.modelStatusToString(h.getModelStatus())
    info = h.getInfo()
    has_solution = info.primal_solution_status == 2
    if text == "Optimal":
        status = "Optimal"
    elif text == "Infeasible":
        status = "Infeasible"
    elif text == "Time limit reached":
        status = "Feasible" if has_solution else "TimeLimit"
    else:
        status = "Error"
    with open(solution_path, "w") as out:
        out.write(f"# status: {status}\n")
        if has_solution and status in ("Optimal", "Feasible"):
            out.write(f"# objective: {info.objective_function_value!r}\n")
            values = h.getSolution().col_value
            for i, value in enumerate(values):
                out.write(f"{h.getColName(i)[1]} {value!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
