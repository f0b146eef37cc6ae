# -*- coding: utf-8 -*-
"""
单位向量流工具箱主程序
命令行入口：生成图、求解群流与向量流、构造等角浸入、合成与秩代数，以及可选的 Web 服务
"""

import argparse
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from loguru import logger

from errors import BudgetExhaustedError, FlowError, PreconditionError, TheoremViolationError
from models.manifest import RunManifest
from services.config_manager import config_manager
from services.serialization import load_document, sha256_file, sha256_text, to_canonical_json

LOG_FORMAT = ("<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
              "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>")

VECTOR_KINDS = ('s0', 's1', 'r3', 's6')


class VecflowCli:
    """命令行程序"""

    def __init__(self):
        self.parser = self._build_parser()
        self.inputs: Dict[str, str] = {}
        self.outcome: Dict[str, Any] = {}
        self.exit_code = 0

    def _setup_logging(self, level: Optional[str] = None, log_file: Optional[str] = None):
        """配置日志：彩色 stderr 输出，可选的滚动文件输出（stdout 只留给 JSON）"""
        log_config = config_manager.get_log()
        logger.remove()
        logger.add(
            sys.stderr,
            format=LOG_FORMAT,
            level=(level or log_config['level']).upper(),
            colorize=True
        )
        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            logger.add(
                log_file,
                format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
                level="DEBUG",
                rotation=log_config['rotation'],
                retention=log_config['retention'],
                compression="zip",
                encoding="utf-8"
            )

    def _build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--out', help='输出文件，默认写到 stdout')
        common.add_argument('--manifest', help='运行清单输出文件')
        common.add_argument('--log-level', help='日志级别')
        common.add_argument('--log-file', help='日志文件')

        parser = argparse.ArgumentParser(prog='vecflow', description='单位向量流工具箱')
        sub = parser.add_subparsers(dest='command', required=True)

        gen = sub.add_parser('gen', parents=[common], help='生成图')
        gen.add_argument('--family', required=True)
        for name in ('a', 'b', 'p', 'n', 'k', 'm', 'd', 'seed'):
            gen.add_argument(f'--{name}', type=int)

        reduce = sub.add_parser('reduce', parents=[common], help='归约到三正则图')
        reduce.add_argument('--graph', required=True)

        solve_group = sub.add_parser('solve-group', parents=[common], help='穷举群流')
        solve_group.add_argument('--graph', required=True)
        solve_group.add_argument('--group', required=True)
        solve_group.add_argument('--budget', type=float)

        solve_vector = sub.add_parser('solve-vector', parents=[common], help='构造向量流')
        solve_vector.add_argument('--graph', required=True)
        solve_vector.add_argument('--kind', required=True, choices=VECTOR_KINDS)
        solve_vector.add_argument('--strategy', default='search', choices=('search', 'recipe'))
        solve_vector.add_argument('--budget', type=float)

        immerse = sub.add_parser('immerse', parents=[common], help='构造等角浸入')
        immerse.add_argument('--construction', required=True)
        immerse.add_argument('--graph')
        immerse.add_argument('--a', type=int)
        immerse.add_argument('--b', type=int)
        immerse.add_argument('--p', type=int)
        immerse.add_argument('--export-polylines', type=int)

        from_immersion = sub.add_parser('flow-from-immersion', parents=[common], help='由浸入导出 S^2 流')
        from_immersion.add_argument('--graph', required=True)
        from_immersion.add_argument('--immersion', required=True)

        from_flow = sub.add_parser('immersion-from-flow', parents=[common], help='由 S^2 流恢复浸入')
        from_flow.add_argument('--graph', required=True)
        from_flow.add_argument('--flow', required=True)

        inject = sub.add_parser('inject', parents=[common], help='注入 H▷G')
        inject.add_argument('--graph-h', required=True)
        inject.add_argument('--w', type=int, required=True)
        inject.add_argument('--graph', required=True)
        inject.add_argument('--v', type=int, required=True)
        inject.add_argument('--flow-h')
        inject.add_argument('--flow-g')
        inject.add_argument('--pairing', help='逗号分隔的排列，如 0,1,2')

        blowup = sub.add_parser('blowup', parents=[common], help='三角形爆破')
        blowup.add_argument('--graph', required=True)
        blowup.add_argument('--v', type=int, required=True)
        blowup.add_argument('--flow')

        compose = sub.add_parser('compose', parents=[common], help='分解合成')
        compose.add_argument('--graph', required=True)
        compose.add_argument('--part', action='append', required=True, help='子图文件:流文件')
        compose.add_argument('--l', type=int, required=True)

        rank = sub.add_parser('rank', parents=[common], help='平衡向量的秩与奇坐标自由性')
        rank.add_argument('--graph', required=True)
        rank.add_argument('--flow', required=True)

        four_flow = sub.add_parser('four-flow', parents=[common], help='合成 Z2 x Z2 流')
        four_flow.add_argument('--graph', required=True)
        four_flow.add_argument('--flow', required=True)

        verify = sub.add_parser('verify', parents=[common], help='校验流或浸入')
        verify.add_argument('--graph', required=True)
        target = verify.add_mutually_exclusive_group(required=True)
        target.add_argument('--flow')
        target.add_argument('--group-flow')
        target.add_argument('--immersion')

        export = sub.add_parser('export', parents=[common], help='导出浸入折线')
        export.add_argument('--graph', required=True)
        export.add_argument('--immersion', required=True)
        export.add_argument('--polylines', type=int, required=True)

        serve = sub.add_parser('serve', parents=[common], help='启动 Web 服务')
        serve.add_argument('--host')
        serve.add_argument('--port', type=int)
        return parser

    # ---- 输入读取 ----

    def _load(self, model, path: str, name: str):
        document = load_document(model, path)
        self.inputs[name] = sha256_file(path)
        return document

    def _graph(self, path: str, name: str = 'graph'):
        from models.schemas import GraphDocument
        document = self._load(GraphDocument, path, name)
        return document.to_graph(), document

    def _vector_flow(self, path: str, graph, name: str = 'flow'):
        from models.schemas import VectorFlowDocument
        return self._load(VectorFlowDocument, path, name).to_flow(graph)

    def _immersion(self, path: str, graph, name: str = 'immersion'):
        from models.schemas import ImmersionDocument
        return self._load(ImmersionDocument, path, name).to_immersion(graph)

    @staticmethod
    def _graph_out(graph, orientation=None) -> Dict[str, Any]:
        from models.schemas import GraphDocument
        return GraphDocument.from_graph(graph, orientation).model_dump(mode='python')

    @staticmethod
    def _flow_out(flow) -> Dict[str, Any]:
        from models.group import GroupFlow
        from models.schemas import GroupFlowDocument, VectorFlowDocument
        if isinstance(flow, GroupFlow):
            return GroupFlowDocument.from_flow(flow).model_dump(mode='python')
        return VectorFlowDocument.from_flow(flow).model_dump(mode='python')

    @staticmethod
    def _immersion_out(immersion) -> Dict[str, Any]:
        from models.schemas import ImmersionDocument
        return ImmersionDocument.from_immersion(immersion).model_dump(mode='python')

    # ---- 子命令 ----

    def cmd_gen(self, args) -> Dict[str, Any]:
        from graph_generators import build_family
        params = {name: getattr(args, name) for name in ('a', 'b', 'p', 'n', 'k', 'm', 'd', 'seed')
                  if getattr(args, name) is not None}
        graph = build_family(args.family, **params)
        self.outcome = {'vertices': graph.num_vertices, 'edges': graph.num_edges}
        return self._graph_out(graph)

    def cmd_reduce(self, args) -> Dict[str, Any]:
        from graph_core import graph_engine
        graph, _ = self._graph(args.graph)
        reduced, trace = graph_engine.reduce_to_cubic(graph)
        self.outcome = {'vertices': reduced.num_vertices, 'edges': reduced.num_edges}
        return {'graph': self._graph_out(reduced), 'trace': trace.to_dict()}

    def cmd_solve_group(self, args) -> Dict[str, Any]:
        from group_flow import group_flow_engine
        from models.group import AbelianGroup
        graph, document = self._graph(args.graph)
        group = AbelianGroup.parse(args.group)
        result = group_flow_engine.solve_flow_exhaustive(graph, group, args.budget, document.to_orientation(graph))
        self.outcome = {'verdict': result.verdict, 'nodes': result.nodes}
        if result.verdict == 'budget-exhausted':
            self.exit_code = config_exit('budget')
        return {
            'verdict': result.verdict,
            'group': list(group.moduli),
            'nodes': result.nodes,
            'flow': self._flow_out(result.flow) if result.flow is not None else None
        }

    def cmd_solve_vector(self, args) -> Dict[str, Any]:
        from vector_flow import vector_flow_engine
        graph, _ = self._graph(args.graph)
        if args.kind == 's0':
            flow = vector_flow_engine.s0_flow_even_graph(graph)
        elif args.kind == 's1':
            flow = vector_flow_engine.s1_flow_R3(graph)
        elif args.kind == 'r3':
            flow = vector_flow_engine.r3_flow_exhaustive(graph, args.budget)
            if flow is None:
                self.outcome = {'verdict': 'proven-none'}
                return {'verdict': 'proven-none', 'flow': None}
        else:
            flow = vector_flow_engine.s6_pipeline(graph, args.budget, args.strategy)
        report = vector_flow_engine.verify_vector_flow(graph, flow)
        self.outcome = {'verdict': 'found', **report.to_dict()}
        return {'verdict': 'found', 'flow': self._flow_out(flow)}

    def cmd_immerse(self, args) -> Dict[str, Any]:
        from immersion_geometry import immersion_engine
        graph = self._graph(args.graph)[0] if args.graph else None
        graph, immersion = immersion_engine.construct(args.construction, graph, args.a, args.b, args.p)
        report = immersion_engine.check_equiangular(graph, immersion)
        self.outcome = {'max_deviation': report.max_deviation, 'valid': report.valid}
        data = {'graph': self._graph_out(graph), 'immersion': self._immersion_out(immersion)}
        if args.export_polylines:
            data['polylines'] = immersion_engine.sample_polylines(immersion, args.export_polylines)
        return data

    def cmd_flow_from_immersion(self, args) -> Dict[str, Any]:
        from immersion_geometry import immersion_engine
        graph, _ = self._graph(args.graph)
        flow = immersion_engine.immersion_to_flow(graph, self._immersion(args.immersion, graph))
        return self._flow_out(flow)

    def cmd_immersion_from_flow(self, args) -> Dict[str, Any]:
        from immersion_geometry import immersion_engine
        graph, _ = self._graph(args.graph)
        immersion = immersion_engine.flow_to_immersion(graph, self._vector_flow(args.flow, graph))
        report = immersion_engine.check_equiangular(graph, immersion)
        self.outcome = {'max_deviation': report.max_deviation, 'valid': report.valid}
        return self._immersion_out(immersion)

    def cmd_inject(self, args) -> Dict[str, Any]:
        from graph_core import graph_engine
        from vector_flow import vector_flow_engine
        graph_h, _ = self._graph(args.graph_h, 'graph_h')
        graph_g, _ = self._graph(args.graph, 'graph')
        pairing = parse_pairing(args.pairing)
        if bool(args.flow_h) != bool(args.flow_g):
            raise PreconditionError("--flow-h 与 --flow-g 必须同时给出")
        if args.flow_h:
            h = self._vector_flow(args.flow_h, graph_h, 'flow_h')
            g = self._vector_flow(args.flow_g, graph_g, 'flow_g')
            injected = vector_flow_engine.injection_flow_transfer(graph_g, g, args.v, graph_h, h, args.w, pairing)
            return {'injection': injected.injection.to_dict(), 'flow': self._flow_out(injected.flow)}
        injection = graph_engine.inject(graph_h, args.w, graph_g, args.v, pairing)
        return {'injection': injection.to_dict()}

    def cmd_blowup(self, args) -> Dict[str, Any]:
        from graph_core import graph_engine
        from vector_flow import vector_flow_engine
        graph, _ = self._graph(args.graph)
        if args.flow:
            injected = vector_flow_engine.blow_up_flow(graph, self._vector_flow(args.flow, graph), args.v)
            return {'injection': injected.injection.to_dict(), 'flow': self._flow_out(injected.flow)}
        return {'injection': graph_engine.blow_up_triangle(graph, args.v).to_dict()}

    def cmd_compose(self, args) -> Dict[str, Any]:
        from vector_flow import vector_flow_engine
        graph, document = self._graph(args.graph)
        parts = []
        for index, part_arg in enumerate(args.part):
            sub_path, sep, flow_path = part_arg.partition(':')
            if not sep or not sub_path or not flow_path:
                raise PreconditionError(f"--part 格式应为 子图文件:流文件: {part_arg}", part=part_arg)
            sub, _ = self._graph(sub_path, f'part{index}_graph')
            parts.append((sub, self._vector_flow(flow_path, sub, f'part{index}_flow')))
        flow = vector_flow_engine.compose_decomposition(graph, parts, args.l, document.to_orientation(graph))
        return self._flow_out(flow)

    def cmd_rank(self, args) -> Dict[str, Any]:
        from rank_algebra import rank_algebra_engine
        from vector_flow import vector_flow_engine
        graph, _ = self._graph(args.graph)
        flow = self._vector_flow(args.flow, graph)
        report = vector_flow_engine.verify_vector_flow(graph, flow)
        if not report.valid:
            raise PreconditionError("输入流未通过校验", **report.to_dict())
        index = vector_flow_engine.build_value_index(graph, flow)
        matrix = rank_algebra_engine.balanced_matrix(graph, index)
        rank = rank_algebra_engine.rank_q(matrix)
        verdict = rank_algebra_engine.odd_coordinate_free(matrix)
        rowspace = rank_algebra_engine.mod2_rowspace(matrix)
        complement = rank_algebra_engine.orthogonal_complement(rowspace)
        certificate = None
        if rank <= 2 and verdict.free:
            certificate = rank_algebra_engine.synthesize_4flow(graph, flow, index).to_dict()
            certificate['dim_rowspace'] = rowspace.dim
        self.outcome = {'b': matrix.b, 'rank': rank, 'odd_coordinate_free': verdict.free,
                        'certificate': certificate is not None}
        return {
            'index': index.to_dict(),
            'balanced': matrix.to_dict(),
            'b': matrix.b,
            'rank': rank,
            'dim_rowspace': rowspace.dim,
            'odd_free': verdict.to_dict(),
            'odd_free_by_rowspace': rank_algebra_engine.odd_free_by_rowspace(matrix),
            'rowspace': rowspace.to_dict(),
            'complement': complement.to_dict(),
            'balanced_residual': vector_flow_engine.balanced_residual(graph, index),
            'certificate': certificate
        }

    def cmd_four_flow(self, args) -> Dict[str, Any]:
        from rank_algebra import rank_algebra_engine
        graph, _ = self._graph(args.graph)
        certificate = rank_algebra_engine.synthesize_4flow(graph, self._vector_flow(args.flow, graph))
        self.outcome = {'b': certificate.b}
        return certificate.to_dict()

    def cmd_verify(self, args) -> Dict[str, Any]:
        graph, _ = self._graph(args.graph)
        if args.flow:
            from vector_flow import vector_flow_engine
            report = vector_flow_engine.verify_vector_flow(graph, self._vector_flow(args.flow, graph))
            valid = report.valid
        elif args.group_flow:
            from group_flow import group_flow_engine
            from models.schemas import GroupFlowDocument
            flow = self._load(GroupFlowDocument, args.group_flow, 'group_flow').to_flow(graph)
            report = group_flow_engine.verify_circulation(graph, flow)
            valid = report.nowhere_zero
        else:
            from immersion_geometry import immersion_engine
            report = immersion_engine.check_equiangular(graph, self._immersion(args.immersion, graph))
            valid = report.valid
        self.outcome = {'valid': valid}
        if not valid:
            self.exit_code = config_exit('precondition')
        return report.to_dict()

    def cmd_export(self, args) -> Dict[str, Any]:
        from immersion_geometry import immersion_engine
        graph, _ = self._graph(args.graph)
        immersion = self._immersion(args.immersion, graph)
        return {'polylines': immersion_engine.sample_polylines(immersion, args.polylines)}

    def cmd_serve(self, args) -> None:
        from web_api import start_web_server
        start_web_server(args.host, args.port)

    # ---- 运行 ----

    def _emit(self, text: str, out: Optional[str]):
        if out:
            Path(out).write_text(text, encoding='utf-8')
            logger.info(f"结果已写入 {out}")
        else:
            sys.stdout.write(text)

    def _write_manifest(self, args, output_text: str, started: float):
        parameters = {key: value for key, value in sorted(vars(args).items())
                      if key not in ('command', 'out', 'manifest', 'log_level', 'log_file') and value is not None}
        manifest = RunManifest(
            command=args.command,
            parameters=parameters,
            input_hashes=dict(sorted(self.inputs.items())),
            tolerances=config_manager.get_tolerance(),
            outcome={'exit_code': self.exit_code, **self.outcome},
            output_hash=sha256_text(output_text),
            wall_time_ms=round((time.monotonic() - started) * 1000.0, 3),
            version=config_manager.get_output()['version']
        )
        Path(args.manifest).write_text(to_canonical_json(manifest.to_dict()), encoding='utf-8')
        logger.info(f"运行清单已写入 {args.manifest}")

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """解析参数并执行子命令，返回退出码"""
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return int(e.code or 0)
        self._setup_logging(args.log_level, args.log_file)
        handler = getattr(self, 'cmd_' + args.command.replace('-', '_'))
        started = time.monotonic()
        logger.debug(f"执行命令 {args.command}")

        try:
            data = handler(args)
        except FlowError as e:
            code = exit_code_for(e)
            logger.error(f"命令 {args.command} 失败 ({e.code}): {e.message}")
            text = to_canonical_json(e.to_dict())
            sys.stdout.write(text)
            self.exit_code = code
            self.outcome = {'error': e.code}
            if args.manifest:
                self._write_manifest(args, text, started)
            return code

        if data is None:
            return self.exit_code
        text = to_canonical_json(data)
        self._emit(text, args.out)
        if args.manifest:
            self._write_manifest(args, text, started)
        return self.exit_code


def config_exit(name: str) -> int:
    from config import EXIT_CODES
    return EXIT_CODES[name]


def exit_code_for(error: FlowError) -> int:
    """领域错误到退出码的映射"""
    if isinstance(error, PreconditionError):
        return config_exit('precondition')
    if isinstance(error, BudgetExhaustedError):
        return config_exit('budget')
    if isinstance(error, TheoremViolationError):
        return config_exit('theorem')
    return config_exit('theorem')


def parse_pairing(text: Optional[str]) -> Optional[List[int]]:
    if not text:
        return None
    try:
        return [int(x) for x in text.split(',')]
    except ValueError:
        raise PreconditionError(f"配对格式错误: {text}", pairing=text) from None


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数"""
    return VecflowCli().run(argv)


if __name__ == "__main__":
    sys.exit(main())
