import argparse
import datetime
import os
from multiprocessing import Pool

from common.utility import parseFloatList, threadCount
from kleinian import execute


def execCmd(argv):
    print("Slice {0} started {1}".format(" ".join(argv), datetime.datetime.now()))
    code = execute(argv)
    print("Slice {0} finished {1} with exit code {2}".format(" ".join(argv), datetime.datetime.now(), code))
    return code


if __name__ == '__main__':
    ap = argparse.ArgumentParser(description="Renders one slice per beta value in parallel")
    ap.add_argument("--betas", default="0,-1,-2,-3", help="Comma separated beta values")
    ap.add_argument("--window", default="-4,4,-3,3", help="xmin,xmax,ymin,ymax")
    ap.add_argument("--res", default="800x600", help="WIDTHxHEIGHT")
    ap.add_argument("--out_dir", default="slices", help="Output folder")
    ap.add_argument("--config", default=None, help="Path to a settings.ini file")
    ap.add_argument("--serial", action='store_true', help="Render one slice after the other")
    args = vars(ap.parse_args())

    if not os.path.isdir(args["out_dir"]):
        os.makedirs(args["out_dir"])

    cmds = []
    for b in parseFloatList(args["betas"]):
        out = os.path.join(args["out_dir"], "slice_beta{0:g}.ppm".format(b))
        argv = ["slice", "render", "--beta={0:g}".format(b), "--window={0}".format(args["window"]),
                "--res", args["res"], "--out", out, "--threads", "1"]
        if args["config"]:
            argv += ["--config", args["config"]]
        cmds.append(argv)

    print("{0} slices to render".format(len(cmds)))
    if args["serial"]:
        codes = [execCmd(argv) for argv in cmds]
    else:
        pool = Pool(min(threadCount(), len(cmds)))
        codes = pool.map(execCmd, cmds)
        pool.close()
        pool.join()
    failed = [c for c in codes if c != 0]
    if failed:
        print("{0} slices failed".format(len(failed)))
