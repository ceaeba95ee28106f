"""
八面体 Morse 铺砌普查：铺砌总数、可壳化个数、临界指标多重集分布
"""
import argparse
import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from morse_shelling.generators.generators_octahedron import octahedron_census, octahedron_search
from morse_shelling.utils import setup_logger


def main():
    parser = argparse.ArgumentParser(description='八面体 Morse 铺砌普查')
    parser.add_argument('--limit', type=int, default=None, help='最多检查的铺砌个数 (默认: 全部)')
    parser.add_argument('--search', action='store_true', help='同时运行 Morse 壳化搜索')
    parser.add_argument('--verbose', action='store_true', help='输出 DEBUG 日志')
    args = parser.parse_args()

    setup_logger("morse_shelling", verbose=args.verbose)
    print("🚀 开始八面体铺砌普查...")
    print()

    summary = octahedron_census(args.limit)
    print(f"✅ 铺砌总数: {summary['tilings']}")
    print(f"✅ 可壳化: {summary['shellable']}")
    print("临界指标多重集分布:")
    for key, count in summary["critical_multisets"].items():
        print(f"  {key}: {count}")

    if args.search:
        try:
            tiling, order = octahedron_search()
        except LookupError as e:
            print(f"\n⚠️ {e}")
            sys.exit(1)
        summary["search"] = {
            "order": list(order.order),
            "tiles": [repr(tile) for tile in tiling.tiles],
        }
        print(f"\n✅ 搜索得到的壳化顺序: {list(order.order)}")

    print()
    print(json.dumps(summary, indent=2, ensure_ascii=False))


if __name__ == "__main__":
    main()
