package org.demo.service;

import org.demo.model.Edge;
import org.demo.model.Graph;
import org.demo.model.Node;

public class GraphService implements Exporter {
    private final Graph graph = new Graph();
    private final Report report = new Report();

    public Edge join(String left, String right) {
        Node a = graph.addNode(left);
        Node b = graph.addNode(right);
        return graph.connect(a, b);
    }

    @Override
    public String format() {
        return "txt";
    }

    @Override
    public String export(Graph g) {
        report.append(g);
        return report.render();
    }

    @Override
    public boolean supports(Graph g, String option) {
        return format().equals(option) && g.size() > 0;
    }

    public GraphService self() {
        return this;
    }
}
